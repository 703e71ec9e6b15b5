#pragma once

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace foi::testing {

struct ProcessResult {
    int exit_code = -1;
    std::string out;
};

/// Runs a shell command, capturing stdout (stderr is discarded).
inline ProcessResult run_command(const std::string& command) {
    ProcessResult res;
    FILE* pipe = ::popen((command + " 2>/dev/null").c_str(), "r");
    if (!pipe) return res;
    std::array<char, 4096> buf{};
    std::size_t n;
    while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) res.out.append(buf.data(), n);
    const int status = ::pclose(pipe);
    res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return res;
}

inline ProcessResult run_foi(const std::string& args) { return run_command(std::string("\"") + FOI_CLI_PATH + "\" " + args); }

inline std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline std::string data_file(const std::string& name) { return std::string(FOI_DATA_DIR) + "/" + name; }

}  // namespace foi::testing
