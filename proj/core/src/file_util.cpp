#include "ouroboros/file_util.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <fstream>
#include <sstream>

#include "ouroboros/error.hpp"

namespace ouroboros {

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content,
                       const std::function<void()>& before_rename) {
    std::filesystem::path tmp = path;
    tmp += ".tmp." + std::to_string(::getpid());

    int fd = ::open(tmp.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
    if (fd < 0)
        throw Error(ErrorCode::IoError,
                    "cannot create '" + tmp.string() + "': " + std::strerror(errno));
    std::size_t written = 0;
    while (written < content.size()) {
        ssize_t n = ::write(fd, content.data() + written, content.size() - written);
        if (n < 0) {
            if (errno == EINTR) continue;
            int err = errno;
            ::close(fd);
            std::filesystem::remove(tmp);
            throw Error(ErrorCode::IoError,
                        "write to '" + tmp.string() + "' failed: " + std::strerror(err));
        }
        written += static_cast<std::size_t>(n);
    }
    ::fsync(fd);
    ::close(fd);

    try {
        if (before_rename) before_rename();
    } catch (...) {
        std::error_code ec;
        std::filesystem::remove(tmp, ec);
        throw;
    }

    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw Error(ErrorCode::IoError, "cannot replace '" + path.string() + "'");
    }
}

FileLock::FileLock(std::filesystem::path target) : lock_path_(std::move(target)) {
    lock_path_ += ".lock";
    int fd = ::open(lock_path_.c_str(), O_WRONLY | O_CREAT | O_EXCL, 0644);
    if (fd < 0) {
        if (errno == EEXIST)
            throw Error(ErrorCode::IoError, "'" + lock_path_.string() + "' is held by another process");
        throw Error(ErrorCode::IoError,
                    "cannot create '" + lock_path_.string() + "': " + std::strerror(errno));
    }
    std::string pid = std::to_string(::getpid()) + "\n";
    [[maybe_unused]] auto n = ::write(fd, pid.data(), pid.size());
    ::close(fd);
}

FileLock::~FileLock() {
    std::error_code ec;
    std::filesystem::remove(lock_path_, ec);
}

}  // namespace ouroboros
