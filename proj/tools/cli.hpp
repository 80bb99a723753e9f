#pragma once
// The `ouroboros` command line: run, consolidate, sleep, validate.

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace ouroboros::cli {

enum ExitCode : int { kOk = 0, kIoError = 1, kUsage = 2 };

// Test seams. `before_rename` runs before each atomic file replacement.
struct Hooks {
    std::function<void()> before_rename;
};

int run(int argc, char** argv, std::ostream& out, std::ostream& err, const Hooks& hooks = {});
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
        const Hooks& hooks = {});

}  // namespace ouroboros::cli
