#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <string_view>

namespace ouroboros {

std::string read_file(const std::filesystem::path& path);

// Writes `content` to a sibling temporary file, then renames it over `path`.
// `before_rename` runs between the two steps; an exception thrown there leaves
// `path` untouched.
void write_file_atomic(const std::filesystem::path& path, std::string_view content,
                       const std::function<void()>& before_rename = {});

// Exclusive advisory lock held through a "<path>.lock" file.
// Throws Error(IoError) when the lock is already taken.
class FileLock {
public:
    explicit FileLock(std::filesystem::path target);
    ~FileLock();
    FileLock(const FileLock&) = delete;
    FileLock& operator=(const FileLock&) = delete;

    const std::filesystem::path& lock_path() const noexcept { return lock_path_; }

private:
    std::filesystem::path lock_path_;
};

}  // namespace ouroboros
