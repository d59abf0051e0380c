#include <weave/error.h>
#include <weave/format.h>

#include <array>
#include <charconv>

namespace weave
{
std::string format_double(const double value)
{
        std::array<char, 32> buffer{};
        const auto [end, ec] = std::to_chars(buffer.data(), buffer.data() + buffer.size(), value);
        require(ec == std::errc(), ErrorKind::numeric, "cannot format value");
        return {buffer.data(), end};
}

double parse_double(std::string_view text)
{
        text = trim(text);
        double value = 0;
        const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
        if (ec != std::errc() || end != text.data() + text.size())
        {
                fail(ErrorKind::data, "not a number: '" + std::string(text) + "'");
        }
        return value;
}

std::vector<std::string_view> split(const std::string_view text, const char separator)
{
        std::vector<std::string_view> parts;
        std::size_t start = 0;
        while (true)
        {
                const std::size_t pos = text.find(separator, start);
                if (pos == std::string_view::npos)
                {
                        parts.push_back(text.substr(start));
                        return parts;
                }
                parts.push_back(text.substr(start, pos - start));
                start = pos + 1;
        }
}

std::string_view trim(std::string_view text)
{
        while (!text.empty() && (text.front() == ' ' || text.front() == '\t'))
        {
                text.remove_prefix(1);
        }
        while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r'))
        {
                text.remove_suffix(1);
        }
        return text;
}
}
