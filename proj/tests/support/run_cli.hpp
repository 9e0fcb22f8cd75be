#pragma once

// Helper for end-to-end tests: runs the installed CLI binary and captures
// stdout, stderr, and the exit code.

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

namespace clitest {

struct Result {
    int exit_code = -1;
    std::string out;
    std::string err;
};

inline std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return content;
}

inline Result run_cli(const std::string& args) {
    static int counter = 0;
    auto dir = std::filesystem::temp_directory_path();
    auto out_path = dir / ("dhpf_cli_out_" + std::to_string(++counter) + ".txt");
    auto err_path = dir / ("dhpf_cli_err_" + std::to_string(counter) + ".txt");

    std::string command = std::string(DHPF_CLI_PATH) + " " + args + " >" + out_path.string() +
                          " 2>" + err_path.string();
    int status = std::system(command.c_str());

    Result result;
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    result.out = slurp(out_path);
    result.err = slurp(err_path);
    std::filesystem::remove(out_path);
    std::filesystem::remove(err_path);
    return result;
}

inline std::filesystem::path write_temp(const std::string& name, const std::string& content) {
    auto path = std::filesystem::temp_directory_path() / name;
    std::ofstream out(path, std::ios::binary);
    out << content;
    return path;
}

}  // namespace clitest
