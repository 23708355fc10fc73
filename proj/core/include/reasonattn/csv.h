/* Copyright 2026 The ReasonAttn Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/
#ifndef REASONATTN_CSV_H_
#define REASONATTN_CSV_H_

#include <string>
#include <string_view>
#include <vector>

namespace reasonattn {

// Minimal RFC 4180 reader: quoted fields may contain commas and doubled
// quotes, not newlines. Empty lines are skipped; '\r' is stripped.
std::vector<std::vector<std::string>> ReadCsv(std::string_view text);

// Quotes the field when it contains a comma, quote or leading/trailing space.
std::string CsvField(std::string_view value);

// Parses a finite double; throws ParseError mentioning `what` otherwise.
double ParseDouble(std::string_view text, std::string_view what);

// Shortest decimal that round-trips to the same double after rounding to
// 12 significant digits. Used for every real written to a report.
std::string FormatReal(double value);

// The double nearest to FormatReal(value); -0 becomes 0.
double RoundReal(double value);

}  // namespace reasonattn

#endif  // REASONATTN_CSV_H_
