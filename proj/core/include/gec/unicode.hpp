#pragma once

#include <string>
#include <string_view>

namespace gec::uni {

// Decodes UTF-8 into code points. Throws FormatError on malformed input.
std::u32string decode_utf8(std::string_view text);

std::string encode_utf8(std::u32string_view cps);

// Canonical composition (NFC) for the repertoire this toolkit cares about:
// combining sequences are reordered by combining class and the Arabic
// hamza/madda pairs are composed (e.g. ALEF + HAMZA ABOVE -> ALEF WITH HAMZA
// ABOVE). Code points outside the table pass through untouched.
std::u32string nfc(std::u32string_view cps);
std::string nfc_utf8(std::string_view text);

// Canonical combining class; 0 for starters and anything unknown.
int combining_class(char32_t cp);

bool is_space(char32_t cp);

// ASCII punctuation plus the Arabic marks and common typographic punctuation
// seen in the shared-task corpora.
bool is_punct(char32_t cp);
bool is_punct_only(std::u32string_view cps);

// Arabic harakat, shadda, sukun, dagger alif and tatweel.
bool is_arabic_diacritic(char32_t cp);

// ASCII-only lowering; Arabic has no case.
char32_t to_lower(char32_t cp);
std::string to_lower_utf8(std::string_view text);

}  // namespace gec::uni
