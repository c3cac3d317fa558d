#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fxtails::test {

inline std::filesystem::path temp_path(const std::string& name) {
    static int counter = 0;
    const auto dir =
        std::filesystem::temp_directory_path() / "fxtails-tests";
    std::filesystem::create_directories(dir);
    return dir / (std::to_string(++counter) + "-" + name);
}

inline std::string write_file(const std::string& name, const std::string& content) {
    const auto path = temp_path(name);
    std::ofstream out(path);
    out << content;
    return path.string();
}

inline std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace fxtails::test
