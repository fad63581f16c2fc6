#include "nf/common/text.h"

#include <cctype>
#include <vector>

#include <unicode/unorm2.h>
#include <unicode/ustring.h>

namespace nf::text {

std::string collapse_whitespace(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    bool pending_space = false;
    for (unsigned char c : s) {
        if (std::isspace(c)) {
            pending_space = !out.empty();
            continue;
        }
        if (pending_space) {
            out.push_back(' ');
            pending_space = false;
        }
        out.push_back(static_cast<char>(c));
    }
    return out;
}

std::string to_lower_ascii(std::string_view s) {
    std::string out(s);
    for (char& c : out) {
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    }
    return out;
}

std::string nfc(std::string_view s) {
    if (s.empty()) return {};

    UErrorCode status = U_ZERO_ERROR;
    const UNormalizer2* norm = unorm2_getNFCInstance(&status);
    if (U_FAILURE(status)) return std::string(s);

    // UTF-8 -> UTF-16
    std::vector<UChar> utf16(s.size() + 1);
    int32_t len16 = 0;
    u_strFromUTF8(utf16.data(), static_cast<int32_t>(utf16.size()), &len16,
                  s.data(), static_cast<int32_t>(s.size()), &status);
    if (U_FAILURE(status)) return std::string(s);

    std::vector<UChar> normalized(static_cast<size_t>(len16) * 2 + 16);
    int32_t norm_len = unorm2_normalize(norm, utf16.data(), len16, normalized.data(),
                                        static_cast<int32_t>(normalized.size()), &status);
    if (status == U_BUFFER_OVERFLOW_ERROR) {
        status = U_ZERO_ERROR;
        normalized.resize(static_cast<size_t>(norm_len) + 1);
        norm_len = unorm2_normalize(norm, utf16.data(), len16, normalized.data(),
                                    static_cast<int32_t>(normalized.size()), &status);
    }
    if (U_FAILURE(status)) return std::string(s);

    // UTF-16 -> UTF-8
    std::string out(static_cast<size_t>(norm_len) * 4 + 4, '\0');
    int32_t len8 = 0;
    u_strToUTF8(out.data(), static_cast<int32_t>(out.size()), &len8, normalized.data(),
                norm_len, &status);
    if (U_FAILURE(status)) return std::string(s);
    out.resize(static_cast<size_t>(len8));
    return out;
}

std::string canonical(std::string_view s) {
    return collapse_whitespace(to_lower_ascii(nfc(s)));
}

std::string normalize_answer(std::string_view s) {
    std::string out = canonical(s);
    while (!out.empty()) {
        char c = out.back();
        if (c == '.' || c == ',' || c == ';' || c == ':' || c == '!' || c == '?') {
            out.pop_back();
        } else {
            break;
        }
    }
    while (!out.empty() && out.back() == ' ') out.pop_back();
    return out;
}

std::vector<std::string> split_words(std::string_view s) {
    std::vector<std::string> words;
    std::string current;
    for (unsigned char c : s) {
        if (std::isspace(c)) {
            if (!current.empty()) {
                words.push_back(std::move(current));
                current.clear();
            }
        } else {
            current.push_back(static_cast<char>(c));
        }
    }
    if (!current.empty()) words.push_back(std::move(current));
    return words;
}

bool starts_with_icase(std::string_view s, std::string_view prefix) {
    if (s.size() < prefix.size()) return false;
    for (size_t i = 0; i < prefix.size(); ++i) {
        unsigned char a = static_cast<unsigned char>(s[i]);
        unsigned char b = static_cast<unsigned char>(prefix[i]);
        if (std::tolower(a) != std::tolower(b)) return false;
    }
    return true;
}

}  // namespace nf::text
