// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "bpe/text.h"

#include <fstream>
#include <sstream>

#include "bpe/error.h"

namespace bpe {

SymbolString DecodeUtf8(std::string_view bytes) {
  SymbolString out;
  out.reserve(bytes.size());
  size_t i = 0;
  while (i < bytes.size()) {
    const auto lead = static_cast<unsigned char>(bytes[i]);
    size_t extra;
    char32_t value;
    if (lead < 0x80) {
      extra = 0;
      value = lead;
    } else if ((lead & 0xE0) == 0xC0) {
      extra = 1;
      value = lead & 0x1F;
    } else if ((lead & 0xF0) == 0xE0) {
      extra = 2;
      value = lead & 0x0F;
    } else if ((lead & 0xF8) == 0xF0) {
      extra = 3;
      value = lead & 0x07;
    } else {
      throw Error(ErrorCode::kParse,
                  "invalid UTF-8 lead byte at offset " + std::to_string(i));
    }
    if (i + extra >= bytes.size()) {
      throw Error(ErrorCode::kParse,
                  "truncated UTF-8 sequence at offset " + std::to_string(i));
    }
    for (size_t k = 1; k <= extra; ++k) {
      const auto cont = static_cast<unsigned char>(bytes[i + k]);
      if ((cont & 0xC0) != 0x80) {
        throw Error(ErrorCode::kParse, "invalid UTF-8 continuation at offset " +
                                           std::to_string(i + k));
      }
      value = (value << 6) | (cont & 0x3F);
    }
    static constexpr char32_t kMinForLength[] = {0, 0x80, 0x800, 0x10000};
    if (value < kMinForLength[extra] || value > 0x10FFFF ||
        (value >= 0xD800 && value <= 0xDFFF)) {
      throw Error(ErrorCode::kParse,
                  "invalid scalar value at offset " + std::to_string(i));
    }
    out.push_back(value);
    i += extra + 1;
  }
  return out;
}

SymbolString DecodeBytes(std::string_view bytes) {
  SymbolString out;
  out.reserve(bytes.size());
  for (char c : bytes) out.push_back(static_cast<unsigned char>(c));
  return out;
}

std::string EncodeUtf8(Symbol symbol) {
  std::string out;
  if (symbol < 0x80) {
    out.push_back(static_cast<char>(symbol));
  } else if (symbol < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (symbol >> 6)));
    out.push_back(static_cast<char>(0x80 | (symbol & 0x3F)));
  } else if (symbol < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (symbol >> 12)));
    out.push_back(static_cast<char>(0x80 | ((symbol >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (symbol & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (symbol >> 18)));
    out.push_back(static_cast<char>(0x80 | ((symbol >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((symbol >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (symbol & 0x3F)));
  }
  return out;
}

std::string EncodeUtf8(SymbolView symbols) {
  std::string out;
  out.reserve(symbols.size());
  for (Symbol s : symbols) out += EncodeUtf8(s);
  return out;
}

bool IsUnicodeWhitespace(Symbol s) {
  return (s >= 0x09 && s <= 0x0D) || s == 0x20 || s == 0x85 || s == 0xA0 ||
         s == 0x1680 || (s >= 0x2000 && s <= 0x200A) || s == 0x2028 ||
         s == 0x2029 || s == 0x202F || s == 0x205F || s == 0x3000;
}

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace bpe
