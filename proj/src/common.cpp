#include "advens/common.hpp"

#include <algorithm>
#include <cerrno>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace advens {

namespace {
constexpr char kB64Chars[] = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";

int b64_value(char c) {
    if (c >= 'A' && c <= 'Z') return c - 'A';
    if (c >= 'a' && c <= 'z') return c - 'a' + 26;
    if (c >= '0' && c <= '9') return c - '0' + 52;
    if (c == '+') return 62;
    if (c == '/') return 63;
    return -1;
}
}  // namespace

std::string base64_encode(const unsigned char* data, std::size_t len) {
    std::string out;
    out.reserve((len + 2) / 3 * 4);
    for (std::size_t i = 0; i < len; i += 3) {
        const unsigned b0 = data[i];
        const unsigned b1 = i + 1 < len ? data[i + 1] : 0;
        const unsigned b2 = i + 2 < len ? data[i + 2] : 0;
        out.push_back(kB64Chars[b0 >> 2]);
        out.push_back(kB64Chars[((b0 & 0x3u) << 4) | (b1 >> 4)]);
        out.push_back(i + 1 < len ? kB64Chars[((b1 & 0xfu) << 2) | (b2 >> 6)] : '=');
        out.push_back(i + 2 < len ? kB64Chars[b2 & 0x3fu] : '=');
    }
    return out;
}

std::vector<unsigned char> base64_decode(const std::string& text) {
    std::vector<unsigned char> out;
    out.reserve(text.size() / 4 * 3);
    int acc = 0;
    int bits = 0;
    for (char c : text) {
        if (c == '=' || c == '\n' || c == '\r') continue;
        const int v = b64_value(c);
        if (v < 0) throw DataError("invalid base64 character");
        acc = (acc << 6) | v;
        bits += 6;
        if (bits >= 8) {
            bits -= 8;
            out.push_back(static_cast<unsigned char>((acc >> bits) & 0xff));
        }
    }
    return out;
}

double median(std::vector<double> values) {
    if (values.empty()) throw ConfigError("median of empty set");
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    if (n % 2 == 1) return values[n / 2];
    return 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> row;
    std::string field;
    bool quoted = false;
    bool any_field = false;
    std::size_t i = 0;
    const std::size_t n = text.size();
    auto end_field = [&] {
        row.push_back(field);
        field.clear();
        any_field = true;
    };
    auto end_row = [&] {
        end_field();
        rows.push_back(row);
        row.clear();
        any_field = false;
    };
    while (i < n) {
        const char c = text[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < n && text[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field.push_back(c);
            }
        } else if (c == '"' && field.empty()) {
            quoted = true;
        } else if (c == ',') {
            end_field();
        } else if (c == '\r') {
            if (i + 1 < n && text[i + 1] == '\n') ++i;
            end_row();
        } else if (c == '\n') {
            end_row();
        } else {
            field.push_back(c);
        }
        ++i;
    }
    if (quoted) throw DataError("unterminated quoted CSV field");
    if (!field.empty() || any_field) end_row();
    return rows;
}

std::vector<std::vector<std::string>> load_csv_file(const std::string& path) {
    return parse_csv(read_text_file(path));
}

std::string csv_field(const std::string& value) {
    if (value.find_first_of(",\"\r\n") == std::string::npos) return value;
    std::string out = "\"";
    for (char c : value) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write file: " + path);
    out << content;
    if (!out) throw DataError("write failed: " + path);
}

std::string double_to_string(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

bool parse_double(const std::string& text, double* out) {
    std::size_t begin = text.find_first_not_of(" \t");
    if (begin == std::string::npos) return false;
    std::size_t end = text.find_last_not_of(" \t") + 1;
    const std::string trimmed = text.substr(begin, end - begin);
    if (trimmed.empty()) return false;
    char* stop = nullptr;
    errno = 0;
    const double v = std::strtod(trimmed.c_str(), &stop);
    if (stop != trimmed.c_str() + trimmed.size() || errno == ERANGE) return false;
    *out = v;
    return true;
}

}  // namespace advens
