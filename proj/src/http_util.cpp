#include "restcov/http.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <ctime>

namespace restcov {

namespace {

constexpr std::array<std::string_view, 9> kMethodNames = {
    "GET", "HEAD", "POST", "PUT", "DELETE", "CONNECT", "OPTIONS", "TRACE", "PATCH"};

int hex_digit(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

}  // namespace

std::string_view to_string(HttpMethod method) {
    return kMethodNames[static_cast<std::size_t>(method)];
}

std::optional<HttpMethod> method_from_string(std::string_view name) {
    for (std::size_t i = 0; i < kMethodNames.size(); ++i) {
        if (iequals(name, kMethodNames[i])) return static_cast<HttpMethod>(i);
    }
    return std::nullopt;
}

bool iequals(std::string_view a, std::string_view b) {
    if (a.size() != b.size()) return false;
    return std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
        return std::tolower(static_cast<unsigned char>(x)) == std::tolower(static_cast<unsigned char>(y));
    });
}

std::string to_lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

std::optional<std::string> header_value(const Headers& headers, std::string_view name) {
    for (const auto& [n, v] : headers) {
        if (iequals(n, name)) return v;
    }
    return std::nullopt;
}

std::optional<Url> parse_url(std::string_view url) {
    auto scheme_end = url.find("://");
    if (scheme_end == std::string_view::npos || scheme_end == 0) return std::nullopt;

    Url out;
    out.scheme = to_lower(url.substr(0, scheme_end));
    std::string_view rest = url.substr(scheme_end + 3);

    auto authority_end = rest.find_first_of("/?#");
    std::string_view authority = rest.substr(0, authority_end);
    if (authority.empty()) return std::nullopt;

    // userinfo@ is rare in API traffic but legal
    if (auto at = authority.rfind('@'); at != std::string_view::npos) {
        authority = authority.substr(at + 1);
    }
    auto colon = authority.rfind(':');
    // an IPv6 literal [::1]:8080 keeps its brackets in `host`
    auto bracket = authority.rfind(']');
    if (colon != std::string_view::npos && (bracket == std::string_view::npos || colon > bracket)) {
        int port = 0;
        auto digits = authority.substr(colon + 1);
        auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), port);
        if (ec != std::errc() || ptr != digits.data() + digits.size() || port < 0 || port > 65535) {
            return std::nullopt;
        }
        out.port = port;
        out.host = std::string(authority.substr(0, colon));
    } else {
        out.host = std::string(authority);
    }
    if (out.host.empty()) return std::nullopt;

    if (authority_end == std::string_view::npos) {
        out.path = "/";
        return out;
    }
    rest = rest.substr(authority_end);

    auto fragment = rest.find('#');
    if (fragment != std::string_view::npos) rest = rest.substr(0, fragment);

    auto question = rest.find('?');
    if (question != std::string_view::npos) {
        out.query = std::string(rest.substr(question + 1));
        rest = rest.substr(0, question);
    }
    out.path = rest.empty() ? "/" : std::string(rest);
    return out;
}

std::string percent_decode(std::string_view s, bool plus_as_space) {
    std::string out;
    out.reserve(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        char c = s[i];
        if (c == '%' && i + 2 < s.size() && hex_digit(s[i + 1]) >= 0 && hex_digit(s[i + 2]) >= 0) {
            out.push_back(static_cast<char>(hex_digit(s[i + 1]) * 16 + hex_digit(s[i + 2])));
            i += 2;
        } else if (c == '+' && plus_as_space) {
            out.push_back(' ');
        } else {
            out.push_back(c);
        }
    }
    return out;
}

std::vector<std::pair<std::string, std::string>> parse_query(std::string_view query) {
    std::vector<std::pair<std::string, std::string>> pairs;
    std::size_t pos = 0;
    while (pos <= query.size()) {
        auto amp = query.find('&', pos);
        std::string_view chunk =
            query.substr(pos, amp == std::string_view::npos ? std::string_view::npos : amp - pos);
        if (!chunk.empty()) {
            auto eq = chunk.find('=');
            if (eq == std::string_view::npos) {
                pairs.emplace_back(percent_decode(chunk, true), "");
            } else {
                pairs.emplace_back(percent_decode(chunk.substr(0, eq), true),
                                   percent_decode(chunk.substr(eq + 1), true));
            }
        }
        if (amp == std::string_view::npos) break;
        pos = amp + 1;
    }
    return pairs;
}

std::string normalize_media_type(std::string_view value) {
    auto semi = value.find(';');
    if (semi != std::string_view::npos) value = value.substr(0, semi);
    std::size_t begin = 0, end = value.size();
    while (begin < end && std::isspace(static_cast<unsigned char>(value[begin]))) ++begin;
    while (end > begin && std::isspace(static_cast<unsigned char>(value[end - 1]))) --end;
    return to_lower(value.substr(begin, end - begin));
}

namespace {
constexpr char kB64Alphabet[] = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";

int b64_value(char c) {
    if (c >= 'A' && c <= 'Z') return c - 'A';
    if (c >= 'a' && c <= 'z') return c - 'a' + 26;
    if (c >= '0' && c <= '9') return c - '0' + 52;
    if (c == '+') return 62;
    if (c == '/') return 63;
    return -1;
}
}  // namespace

std::string base64_encode(std::string_view bytes) {
    std::string out;
    out.reserve((bytes.size() + 2) / 3 * 4);
    std::size_t i = 0;
    for (; i + 3 <= bytes.size(); i += 3) {
        unsigned v = (static_cast<unsigned char>(bytes[i]) << 16) |
                     (static_cast<unsigned char>(bytes[i + 1]) << 8) |
                     static_cast<unsigned char>(bytes[i + 2]);
        out.push_back(kB64Alphabet[(v >> 18) & 63]);
        out.push_back(kB64Alphabet[(v >> 12) & 63]);
        out.push_back(kB64Alphabet[(v >> 6) & 63]);
        out.push_back(kB64Alphabet[v & 63]);
    }
    if (i + 1 == bytes.size()) {
        unsigned v = static_cast<unsigned char>(bytes[i]) << 16;
        out.push_back(kB64Alphabet[(v >> 18) & 63]);
        out.push_back(kB64Alphabet[(v >> 12) & 63]);
        out += "==";
    } else if (i + 2 == bytes.size()) {
        unsigned v = (static_cast<unsigned char>(bytes[i]) << 16) |
                     (static_cast<unsigned char>(bytes[i + 1]) << 8);
        out.push_back(kB64Alphabet[(v >> 18) & 63]);
        out.push_back(kB64Alphabet[(v >> 12) & 63]);
        out.push_back(kB64Alphabet[(v >> 6) & 63]);
        out.push_back('=');
    }
    return out;
}

std::optional<std::string> base64_decode(std::string_view text) {
    std::string out;
    out.reserve(text.size() / 4 * 3);
    unsigned buffer = 0;
    int bits = 0;
    std::size_t padding = 0;
    for (char c : text) {
        if (c == '\r' || c == '\n') continue;
        if (c == '=') {
            ++padding;
            continue;
        }
        if (padding > 0) return std::nullopt;  // data after '='
        int v = b64_value(c);
        if (v < 0) return std::nullopt;
        buffer = (buffer << 6) | static_cast<unsigned>(v);
        bits += 6;
        if (bits >= 8) {
            bits -= 8;
            out.push_back(static_cast<char>((buffer >> bits) & 0xff));
        }
    }
    if (padding > 2) return std::nullopt;
    return out;
}

std::string format_iso8601_ms(std::int64_t epoch_ms) {
    std::int64_t secs = epoch_ms / 1000;
    std::int64_t ms = epoch_ms % 1000;
    if (ms < 0) {
        ms += 1000;
        secs -= 1;
    }
    std::time_t t = static_cast<std::time_t>(secs);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02d.%03dZ", tm.tm_year + 1900,
                  tm.tm_mon + 1, tm.tm_mday, tm.tm_hour, tm.tm_min, tm.tm_sec,
                  static_cast<int>(ms));
    return buf;
}

std::optional<std::int64_t> parse_iso8601_ms(std::string_view text) {
    // YYYY-MM-DDTHH:MM:SS[.fraction](Z|±HH:MM|±HHMM)
    std::tm tm{};
    int consumed = 0;
    std::string head(text.substr(0, std::min<std::size_t>(text.size(), 19)));
    if (std::sscanf(head.c_str(), "%4d-%2d-%2dT%2d:%2d:%2d%n", &tm.tm_year, &tm.tm_mon, &tm.tm_mday,
                    &tm.tm_hour, &tm.tm_min, &tm.tm_sec, &consumed) != 6 ||
        consumed != 19) {
        return std::nullopt;
    }
    if (tm.tm_mon < 1 || tm.tm_mon > 12 || tm.tm_mday < 1 || tm.tm_mday > 31) return std::nullopt;
    tm.tm_year -= 1900;
    tm.tm_mon -= 1;

    std::string_view rest = text.substr(19);
    std::int64_t ms = 0;
    if (!rest.empty() && rest.front() == '.') {
        rest.remove_prefix(1);
        std::size_t n = 0;
        std::int64_t frac = 0;
        while (n < rest.size() && std::isdigit(static_cast<unsigned char>(rest[n]))) {
            if (n < 3) frac = frac * 10 + (rest[n] - '0');
            ++n;
        }
        if (n == 0) return std::nullopt;
        for (std::size_t k = n; k < 3; ++k) frac *= 10;
        ms = frac;
        rest.remove_prefix(n);
    }

    std::int64_t offset_s = 0;
    if (rest == "Z" || rest == "z") {
        // UTC
    } else if (!rest.empty() && (rest.front() == '+' || rest.front() == '-')) {
        int sign = rest.front() == '-' ? -1 : 1;
        int oh = 0, om = 0;
        std::string tail(rest.substr(1));
        if (std::sscanf(tail.c_str(), "%2d:%2d", &oh, &om) == 2 && tail.size() == 5) {
        } else if (std::sscanf(tail.c_str(), "%2d%2d", &oh, &om) == 2 && tail.size() == 4) {
        } else {
            return std::nullopt;
        }
        offset_s = sign * (oh * 3600 + om * 60);
    } else if (!rest.empty()) {
        return std::nullopt;
    }
    // a bare timestamp (no designator) is taken as UTC

    std::time_t utc = timegm(&tm);
    if (utc == static_cast<std::time_t>(-1)) return std::nullopt;
    return (static_cast<std::int64_t>(utc) - offset_s) * 1000 + ms;
}

}  // namespace restcov
