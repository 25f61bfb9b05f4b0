#include "wurn/csv.hpp"

#include <charconv>
#include <stdexcept>

namespace wurn::csv {

std::vector<std::string> split(std::string_view line)
{
    std::vector<std::string> fields;
    std::string field;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i)
    {
        char const ch = line[i];
        if (quoted)
        {
            if (ch == '"')
            {
                if (i + 1 < line.size() && line[i + 1] == '"')
                {
                    field += '"';
                    ++i;
                }
                else
                {
                    quoted = false;
                }
            }
            else
            {
                field += ch;
            }
        }
        else if (ch == '"')
        {
            quoted = true;
        }
        else if (ch == ',')
        {
            fields.push_back(std::move(field));
            field.clear();
        }
        else
        {
            field += ch;
        }
    }
    if (quoted)
        throw std::invalid_argument("unterminated quoted field");
    fields.push_back(std::move(field));
    return fields;
}

bool next_line(std::istream& in, std::string& line)
{
    while (std::getline(in, line))
    {
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (!line.empty())
            return true;
    }
    return false;
}

double to_double(std::string const& field)
{
    std::size_t used = 0;
    double const value = std::stod(field, &used);
    if (used != field.size())
        throw std::invalid_argument("not a number: '" + field + "'");
    return value;
}

int to_int(std::string const& field)
{
    int value = 0;
    auto const* end = field.data() + field.size();
    auto const [ptr, ec] = std::from_chars(field.data(), end, value);
    if (ec != std::errc{} || ptr != end)
        throw std::invalid_argument("not an integer: '" + field + "'");
    return value;
}

std::string quote(std::string const& field)
{
    bool const needs = field.find_first_of(",\"\n") != std::string::npos
                       || (!field.empty() && (field.front() == ' ' || field.back() == ' '));
    if (!needs)
        return field;
    std::string out = "\"";
    for (char ch : field)
    {
        if (ch == '"')
            out += '"';
        out += ch;
    }
    return out + '"';
}

}  // namespace wurn::csv
