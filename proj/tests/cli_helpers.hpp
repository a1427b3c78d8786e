#pragma once

// Helpers for driving the installed CLI binary from tests.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

namespace cli {

struct RunResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

inline std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// Scratch directory that lives for one test scope.
class Scratch {
public:
    explicit Scratch(const std::string& label) {
        static int counter = 0;
        dir_ = std::filesystem::temp_directory_path() /
               ("mobrisk_" + label + "_" + std::to_string(++counter) + "_" +
                std::to_string(static_cast<unsigned>(getpid())));
        std::filesystem::create_directories(dir_);
    }
    ~Scratch() {
        std::error_code ec;
        std::filesystem::remove_all(dir_, ec);
    }
    std::filesystem::path path(const std::string& name) const { return dir_ / name; }
    const std::filesystem::path& dir() const { return dir_; }

private:
    std::filesystem::path dir_;
};

inline RunResult run(const std::string& binary, const std::string& args, const Scratch& scratch) {
    static int run_id = 0;
    auto out_path = scratch.path("stdout_" + std::to_string(++run_id));
    auto err_path = scratch.path("stderr_" + std::to_string(run_id));
    std::string cmd =
        binary + " " + args + " >" + out_path.string() + " 2>" + err_path.string();
    int status = std::system(cmd.c_str());
    RunResult result;
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    result.out = slurp(out_path);
    result.err = slurp(err_path);
    return result;
}

}  // namespace cli
