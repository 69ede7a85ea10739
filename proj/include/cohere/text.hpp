#ifndef COHERE_TEXT_HPP
#define COHERE_TEXT_HPP

// Small tokenizing / number helpers shared by the text formats.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cohere::text {

// Shortest decimal form that parses back to the identical double.
std::string format_real(double value);

std::optional<double> parse_real(std::string_view token);
std::optional<std::uint64_t> parse_uint(std::string_view token);
std::optional<std::int64_t> parse_int(std::string_view token);

// Splits on runs of spaces/tabs (delimiter == 0) or on every occurrence of
// `delimiter`. Surrounding whitespace is trimmed from each field.
std::vector<std::string_view> split(std::string_view line, char delimiter = 0);

std::string_view trim(std::string_view s);

} // namespace cohere::text

#endif // COHERE_TEXT_HPP
