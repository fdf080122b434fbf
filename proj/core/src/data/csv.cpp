#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "sprego/data/table.hpp"

namespace sprego::data {

CsvError::CsvError(std::size_t line, const std::string& message)
    : std::runtime_error("csv line " + std::to_string(line) + ": " + message), line_(line) {}

namespace {

struct Field {
    std::string text;
    bool quoted = false;
};

using Record = std::vector<Field>;

/// Returns the 1-based line of the first invalid UTF-8 sequence, or 0.
std::size_t invalid_utf8_line(std::string_view s) {
    std::size_t line = 1;
    for (std::size_t i = 0; i < s.size();) {
        const auto c = static_cast<unsigned char>(s[i]);
        if (c == '\n') ++line;
        std::size_t len = 0;
        std::uint32_t cp = 0;
        if (c < 0x80) {
            ++i;
            continue;
        } else if ((c >> 5) == 0x6) {
            len = 2;
            cp = c & 0x1f;
        } else if ((c >> 4) == 0xe) {
            len = 3;
            cp = c & 0x0f;
        } else if ((c >> 3) == 0x1e) {
            len = 4;
            cp = c & 0x07;
        } else {
            return line;
        }
        if (i + len > s.size()) return line;
        for (std::size_t k = 1; k < len; ++k) {
            const auto cc = static_cast<unsigned char>(s[i + k]);
            if ((cc >> 6) != 0x2) return line;
            cp = (cp << 6) | (cc & 0x3f);
        }
        const bool overlong = (len == 2 && cp < 0x80) || (len == 3 && cp < 0x800) || (len == 4 && cp < 0x10000);
        if (overlong || cp > 0x10ffff || (cp >= 0xd800 && cp <= 0xdfff)) return line;
        i += len;
    }
    return 0;
}

std::vector<Record> read_records(std::string_view s) {
    std::vector<Record> records;
    Record current;
    std::size_t line = 1;
    std::size_t i = 0;
    const std::size_t n = s.size();

    auto end_of_line = [&](std::size_t p) { return p >= n || s[p] == '\n' || (s[p] == '\r' && p + 1 < n && s[p + 1] == '\n') || s[p] == '\r'; };

    while (i < n) {
        Field field;
        if (s[i] == '"') {
            const std::size_t open_line = line;
            field.quoted = true;
            ++i;
            while (true) {
                if (i >= n) throw CsvError(open_line, "unbalanced quotes");
                if (s[i] == '"') {
                    if (i + 1 < n && s[i + 1] == '"') {
                        field.text += '"';
                        i += 2;
                        continue;
                    }
                    ++i;
                    break;
                }
                if (s[i] == '\n') ++line;
                field.text += s[i++];
            }
            if (i < n && s[i] != ',' && !end_of_line(i)) throw CsvError(line, "unexpected character after closing quote");
        } else {
            while (i < n && s[i] != ',' && !end_of_line(i)) field.text += s[i++];
        }
        current.push_back(std::move(field));

        if (i < n && s[i] == ',') {
            ++i;
            if (i >= n) current.push_back(Field{});  // trailing comma at EOF
            continue;
        }
        // end of record
        records.push_back(std::move(current));
        current.clear();
        if (i < n) {
            if (s[i] == '\r') ++i;
            if (i < n && s[i] == '\n') ++i;
            ++line;
        }
    }
    if (!current.empty()) records.push_back(std::move(current));
    return records;
}

Value type_field(const Field& f) {
    if (f.quoted) return f.text;
    if (f.text.empty()) return Blank{};
    if (auto n = parse_numeral(f.text)) return *n;
    std::string upper(f.text);
    std::transform(upper.begin(), upper.end(), upper.begin(), [](unsigned char c) { return std::toupper(c); });
    if (upper == "TRUE") return true;
    if (upper == "FALSE") return false;
    return f.text;
}

}  // namespace

Table load_csv(std::string_view bytes, const CsvOptions& options) {
    if (bytes.size() >= 3 && bytes.substr(0, 3) == "\xEF\xBB\xBF") bytes.remove_prefix(3);
    if (auto bad = invalid_utf8_line(bytes)) throw CsvError(bad, "input is not valid UTF-8");

    auto records = read_records(bytes);
    std::size_t width = 0;
    for (const auto& r : records) width = std::max(width, r.size());

    std::vector<Column> columns(width);
    std::size_t first_data = 0;
    for (std::size_t c = 0; c < width; ++c) columns[c].header = "C" + std::to_string(c + 1);
    if (options.has_header && !records.empty()) {
        for (std::size_t c = 0; c < records[0].size(); ++c) {
            if (!records[0][c].text.empty()) columns[c].header = records[0][c].text;
        }
        first_data = 1;
    }
    for (std::size_t r = first_data; r < records.size(); ++r) {
        for (std::size_t c = 0; c < width; ++c) {
            columns[c].cells.push_back(c < records[r].size() ? type_field(records[r][c]) : Value{});
        }
    }
    try {
        return Table(options.table_name, std::move(columns));
    } catch (const std::invalid_argument& e) {
        throw CsvError(1, e.what());
    }
}

Table load_csv_file(const std::string& path, const CsvOptions& options) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CsvError(0, "cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return load_csv(buf.str(), options);
}

}  // namespace sprego::data
