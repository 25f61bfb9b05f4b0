#pragma once

#include <cstdint>
#include <filesystem>
#include <ostream>
#include <string_view>

namespace wurn::cli {

enum ExitCode : int
{
    kSuccess = 0,
    kUsage = 1,
    kValidation = 2,
    kIngest = 3,
    kBudget = 4,
    kIo = 5,
};

/// Entry point of the `wurn` tool; argv[0] is the program name.
int run(int argc, char const* const* argv, std::ostream& out, std::ostream& err);

/// 64-bit FNV-1a of a byte string and of a file's contents.
std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t state = 0xcbf29ce484222325ULL);
std::uint64_t fnv1a64_file(std::filesystem::path const& path);

}  // namespace wurn::cli
