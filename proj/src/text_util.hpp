#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace epq::detail {

std::string read_file(const std::string& path);

/// Splits on whitespace after dropping a trailing '#' comment.
std::vector<std::string> tokenize_line(std::string_view line);

/// Lines of `text`, without line terminators.
std::vector<std::string_view> split_lines(std::string_view text);

} // namespace epq::detail
