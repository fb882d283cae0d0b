#include "gec/unicode.hpp"

#include <algorithm>
#include <array>
#include <utility>

#include "gec/errors.hpp"

namespace gec::uni {

namespace {

[[noreturn]] void bad_utf8() { throw FormatError("invalid UTF-8 byte sequence"); }

}  // namespace

std::u32string decode_utf8(std::string_view text) {
  std::u32string out;
  out.reserve(text.size());
  std::size_t i = 0;
  const auto n = text.size();
  while (i < n) {
    const auto b0 = static_cast<unsigned char>(text[i]);
    char32_t cp = 0;
    std::size_t len = 0;
    if (b0 < 0x80) {
      cp = b0;
      len = 1;
    } else if ((b0 & 0xE0) == 0xC0) {
      cp = b0 & 0x1F;
      len = 2;
    } else if ((b0 & 0xF0) == 0xE0) {
      cp = b0 & 0x0F;
      len = 3;
    } else if ((b0 & 0xF8) == 0xF0) {
      cp = b0 & 0x07;
      len = 4;
    } else {
      bad_utf8();
    }
    if (i + len > n) bad_utf8();
    for (std::size_t k = 1; k < len; ++k) {
      const auto b = static_cast<unsigned char>(text[i + k]);
      if ((b & 0xC0) != 0x80) bad_utf8();
      cp = (cp << 6) | (b & 0x3F);
    }
    // Reject overlongs, surrogates and out-of-range values.
    if ((len == 2 && cp < 0x80) || (len == 3 && cp < 0x800) ||
        (len == 4 && cp < 0x10000) || cp > 0x10FFFF ||
        (cp >= 0xD800 && cp <= 0xDFFF)) {
      bad_utf8();
    }
    out.push_back(cp);
    i += len;
  }
  return out;
}

std::string encode_utf8(std::u32string_view cps) {
  std::string out;
  out.reserve(cps.size() * 2);
  for (char32_t cp : cps) {
    if (cp < 0x80) {
      out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
      out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
      out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
      out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
  }
  return out;
}

int combining_class(char32_t cp) {
  switch (cp) {
    case 0x064B: return 27;  // fathatan
    case 0x064C: return 28;  // dammatan
    case 0x064D: return 29;  // kasratan
    case 0x064E: return 30;  // fatha
    case 0x064F: return 31;  // damma
    case 0x0650: return 32;  // kasra
    case 0x0651: return 33;  // shadda
    case 0x0652: return 34;  // sukun
    case 0x0670: return 35;  // superscript alef
    case 0x0653: return 230; // maddah above
    case 0x0654: return 230; // hamza above
    case 0x0655: return 220; // hamza below
    case 0x0656: return 220; // subscript alef
    default: return 0;
  }
}

namespace {

// Canonical compositions in the Arabic block.
char32_t compose_pair(char32_t base, char32_t mark) {
  if (mark == 0x0653 && base == 0x0627) return 0x0622;  // alef madda
  if (mark == 0x0654) {
    switch (base) {
      case 0x0627: return 0x0623;  // alef hamza above
      case 0x0648: return 0x0624;  // waw hamza
      case 0x064A: return 0x0626;  // yeh hamza
      default: break;
    }
  }
  if (mark == 0x0655 && base == 0x0627) return 0x0625;  // alef hamza below
  return 0;
}

}  // namespace

std::u32string nfc(std::u32string_view cps) {
  std::u32string buf(cps);

  // Canonical ordering: stable-sort maximal runs of combining marks by class.
  std::size_t i = 0;
  while (i < buf.size()) {
    if (combining_class(buf[i]) == 0) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < buf.size() && combining_class(buf[j]) != 0) ++j;
    std::stable_sort(buf.begin() + static_cast<std::ptrdiff_t>(i),
                     buf.begin() + static_cast<std::ptrdiff_t>(j),
                     [](char32_t a, char32_t b) {
                       return combining_class(a) < combining_class(b);
                     });
    i = j;
  }

  std::u32string out;
  out.reserve(buf.size());
  std::ptrdiff_t last_starter = -1;
  for (char32_t cp : buf) {
    const int ccc = combining_class(cp);
    if (ccc == 0) {
      out.push_back(cp);
      last_starter = static_cast<std::ptrdiff_t>(out.size()) - 1;
      continue;
    }
    // A mark is blocked from the starter if a mark with ccc >= its own sits
    // in between.
    const bool blocked =
        last_starter < 0 ||
        (static_cast<std::ptrdiff_t>(out.size()) - 1 > last_starter &&
         combining_class(out.back()) >= ccc);
    if (!blocked) {
      if (const char32_t composed = compose_pair(out[static_cast<std::size_t>(last_starter)], cp)) {
        out[static_cast<std::size_t>(last_starter)] = composed;
        continue;
      }
    }
    out.push_back(cp);
  }
  return out;
}

std::string nfc_utf8(std::string_view text) {
  return encode_utf8(nfc(decode_utf8(text)));
}

bool is_space(char32_t cp) {
  return cp == U' ' || cp == U'\t' || cp == U'\n' || cp == U'\r' ||
         cp == 0x000B || cp == 0x000C || cp == 0x00A0;
}

bool is_punct(char32_t cp) {
  if (cp < 0x80) {
    return (cp >= 0x21 && cp <= 0x2F) || (cp >= 0x3A && cp <= 0x40) ||
           (cp >= 0x5B && cp <= 0x60) || (cp >= 0x7B && cp <= 0x7E);
  }
  switch (cp) {
    case 0x060C:  // arabic comma
    case 0x061B:  // arabic semicolon
    case 0x061F:  // arabic question mark
    case 0x066A:  // arabic percent
    case 0x066B:  // arabic decimal separator
    case 0x066C:  // arabic thousands separator
    case 0x066D:  // arabic five pointed star
    case 0x06D4:  // arabic full stop
    case 0x00AB:
    case 0x00BB:
    case 0x00A1:
    case 0x00BF:
    case 0x2010:
    case 0x2011:
    case 0x2012:
    case 0x2013:
    case 0x2014:
    case 0x2018:
    case 0x2019:
    case 0x201A:
    case 0x201C:
    case 0x201D:
    case 0x201E:
    case 0x2026:
    case 0x2039:
    case 0x203A:
    case 0x00B7:
      return true;
    default:
      return false;
  }
}

bool is_punct_only(std::u32string_view cps) {
  if (cps.empty()) return false;
  return std::all_of(cps.begin(), cps.end(), [](char32_t c) { return is_punct(c); });
}

bool is_arabic_diacritic(char32_t cp) {
  return (cp >= 0x064B && cp <= 0x0652) || cp == 0x0670 || cp == 0x0640;
}

char32_t to_lower(char32_t cp) {
  if (cp >= U'A' && cp <= U'Z') return cp + 32;
  return cp;
}

std::string to_lower_utf8(std::string_view text) {
  auto cps = decode_utf8(text);
  for (auto& c : cps) c = to_lower(c);
  return encode_utf8(cps);
}

}  // namespace gec::uni
