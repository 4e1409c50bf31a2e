#include "frex/normalize.hpp"

#include <unicode/normalizer2.h>
#include <unicode/unistr.h>

#include "frex/error.hpp"

namespace frex {

std::string normalize_key(std::string_view text) {
  // Pure ASCII fast path: folding is a plain lowercase and NFC is a no-op.
  bool ascii = true;
  for (unsigned char c : text) {
    if (c >= 0x80) {
      ascii = false;
      break;
    }
  }
  if (ascii) {
    std::string out(text);
    for (char& c : out) {
      if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    }
    return out;
  }

  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* nfc = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status)) throw Error("ICU NFC normalizer unavailable");

  icu::UnicodeString folded =
      icu::UnicodeString::fromUTF8(icu::StringPiece(text.data(), static_cast<int32_t>(text.size())));
  folded.foldCase();
  icu::UnicodeString normalized = nfc->normalize(folded, status);
  if (U_FAILURE(status)) throw Error("ICU normalization failed");

  std::string out;
  normalized.toUTF8String(out);
  return out;
}

}  // namespace frex
