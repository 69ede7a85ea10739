#include "cohere/text.hpp"

#include <array>
#include <charconv>
#include <cmath>

namespace cohere::text {

std::string format_real(double value)
{
    std::array<char, 64> buf{};
    auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    return std::string(buf.data(), res.ptr);
}

std::optional<double> parse_real(std::string_view token)
{
    token = trim(token);
    if (token.empty())
        return std::nullopt;
    // from_chars rejects a leading '+', which some tables use.
    if (token.front() == '+')
        token.remove_prefix(1);
    double value = 0.0;
    auto res = std::from_chars(token.data(), token.data() + token.size(), value);
    if (res.ec != std::errc{} || res.ptr != token.data() + token.size())
        return std::nullopt;
    return value;
}

std::optional<std::uint64_t> parse_uint(std::string_view token)
{
    token = trim(token);
    std::uint64_t value = 0;
    auto res = std::from_chars(token.data(), token.data() + token.size(), value);
    if (token.empty() || res.ec != std::errc{} || res.ptr != token.data() + token.size())
        return std::nullopt;
    return value;
}

std::optional<std::int64_t> parse_int(std::string_view token)
{
    token = trim(token);
    std::int64_t value = 0;
    auto res = std::from_chars(token.data(), token.data() + token.size(), value);
    if (token.empty() || res.ec != std::errc{} || res.ptr != token.data() + token.size())
        return std::nullopt;
    return value;
}

std::string_view trim(std::string_view s)
{
    constexpr std::string_view ws = " \t\r\n";
    auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos)
        return {};
    auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split(std::string_view line, char delimiter)
{
    std::vector<std::string_view> out;
    if (delimiter == 0) {
        std::size_t i = 0;
        while (i < line.size()) {
            while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r'))
                ++i;
            if (i >= line.size())
                break;
            std::size_t j = i;
            while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r')
                ++j;
            out.push_back(line.substr(i, j - i));
            i = j;
        }
        return out;
    }
    std::size_t start = 0;
    while (true) {
        auto pos = line.find(delimiter, start);
        if (pos == std::string_view::npos) {
            out.push_back(trim(line.substr(start)));
            break;
        }
        out.push_back(trim(line.substr(start, pos - start)));
        start = pos + 1;
    }
    return out;
}

} // namespace cohere::text
