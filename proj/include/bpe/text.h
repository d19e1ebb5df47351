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

#ifndef BPE_TEXT_H_
#define BPE_TEXT_H_

#include <string>
#include <string_view>

namespace bpe {

// One alphabet unit. In the default mode this is a unicode scalar value; in
// byte mode each input byte becomes one symbol in [0, 255].
using Symbol = char32_t;
using SymbolString = std::u32string;
using SymbolView = std::u32string_view;

// Throws Error(kParse) on malformed UTF-8, reporting the byte offset.
SymbolString DecodeUtf8(std::string_view bytes);
SymbolString DecodeBytes(std::string_view bytes);

std::string EncodeUtf8(SymbolView symbols);
std::string EncodeUtf8(Symbol symbol);

bool IsUnicodeWhitespace(Symbol symbol);

// Reads a whole file; throws Error(kIo) when it cannot be opened.
std::string ReadFile(const std::string& path);

}  // namespace bpe

#endif  // BPE_TEXT_H_
