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
#include "reasonattn/program.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <sstream>

#include "reasonattn/tokens.h"

namespace reasonattn {

std::string_view OpKindName(OpKind kind) {
  switch (kind) {
    case OpKind::kSelect: return "select";
    case OpKind::kFilter: return "filter";
    case OpKind::kQuery: return "query";
    case OpKind::kVerify: return "verify";
    case OpKind::kCompare: return "compare";
    case OpKind::kRelate: return "relate";
    case OpKind::kAnd: return "and";
    case OpKind::kOr: return "or";
  }
  return "?";
}

std::optional<OpKind> OpKindFromName(std::string_view name) {
  const std::string normalized = NormalizeToken(name);
  for (OpKind kind : kAllOpKinds) {
    if (OpKindName(kind) == normalized) return kind;
  }
  return std::nullopt;
}

std::string_view ProgramRuleName(ProgramRule rule) {
  switch (rule) {
    case ProgramRule::kEmpty: return "empty-program";
    case ProgramRule::kIndexMismatch: return "index-mismatch";
    case ProgramRule::kArity: return "arity";
    case ProgramRule::kForwardDependency: return "forward-dependency";
    case ProgramRule::kDependencyOutOfRange: return "dependency-out-of-range";
    case ProgramRule::kUnreachable: return "unreachable-step";
  }
  return "?";
}

ProgramError::ProgramError(const ProgramViolation& violation)
    : ValidationError("program: step " + std::to_string(violation.step) +
                          ": " + std::string(ProgramRuleName(violation.rule)) +
                          ": " + violation.message,
                      std::to_string(violation.step)),
      violation_(violation) {}

namespace {

// Cursor over one line of program text; errors carry absolute positions.
class LineScanner {
 public:
  LineScanner(std::string_view line, std::size_t line_no)
      : line_(line), line_no_(line_no) {}

  bool AtEnd() {
    SkipSpace();
    return pos_ >= line_.size();
  }
  void SkipSpace() {
    while (pos_ < line_.size() &&
           std::isspace(static_cast<unsigned char>(line_[pos_]))) {
      ++pos_;
    }
  }
  bool Consume(std::string_view token) {
    SkipSpace();
    if (line_.substr(pos_, token.size()) == token) {
      pos_ += token.size();
      return true;
    }
    return false;
  }
  void Expect(std::string_view token) {
    if (!Consume(token)) Fail("expected '" + std::string(token) + "'");
  }
  int Integer() {
    SkipSpace();
    int value = 0;
    const char* begin = line_.data() + pos_;
    auto [ptr, ec] = std::from_chars(begin, line_.data() + line_.size(), value);
    if (ec != std::errc() || ptr == begin) Fail("expected a step index");
    pos_ += static_cast<std::size_t>(ptr - begin);
    return value;
  }
  std::string Word() {
    SkipSpace();
    const std::size_t start = pos_;
    while (pos_ < line_.size() &&
           (std::isalpha(static_cast<unsigned char>(line_[pos_])) ||
            line_[pos_] == '_')) {
      ++pos_;
    }
    if (start == pos_) Fail("expected a name");
    return std::string(line_.substr(start, pos_ - start));
  }
  // Raw text up to (not including) the next ',' or ')'.
  std::string Value() {
    const std::size_t start = pos_;
    while (pos_ < line_.size() && line_[pos_] != ',' && line_[pos_] != ')') {
      ++pos_;
    }
    return std::string(line_.substr(start, pos_ - start));
  }
  std::size_t column() const { return pos_ + 1; }

  [[noreturn]] void Fail(const std::string& what) const {
    throw ParseError("program: " + what, line_no_, pos_ + 1);
  }

 private:
  std::string_view line_;
  std::size_t line_no_;
  std::size_t pos_ = 0;
};

Step ParseStepLine(std::string_view line, std::size_t line_no,
                   int expected_index) {
  LineScanner scan(line, line_no);
  Step step;
  step.index = scan.Integer();
  if (step.index != expected_index) {
    scan.Fail("step index " + std::to_string(step.index) + " out of order, expected " +
              std::to_string(expected_index));
  }
  scan.Expect(":");
  const std::string name = scan.Word();
  auto kind = OpKindFromName(name);
  if (!kind) scan.Fail("unknown operation '" + name + "'");
  step.kind = *kind;

  if (scan.Consume("(")) {
    if (!scan.Consume(")")) {
      do {
        const std::string key = NormalizeToken(scan.Word());
        scan.Expect("=");
        const std::size_t value_col = scan.column();
        std::string value = NormalizeToken(scan.Value());
        if (value.empty()) {
          throw ParseError("program: empty value for '" + key + "'", line_no,
                           value_col);
        }
        std::optional<std::string>* slot = nullptr;
        if (key == "category") slot = &step.category;
        else if (key == "attribute") slot = &step.attribute;
        else if (key == "relation") slot = &step.relation;
        else scan.Fail("unknown argument '" + key + "'");
        if (slot->has_value()) scan.Fail("repeated argument '" + key + "'");
        *slot = std::move(value);
      } while (scan.Consume(","));
      scan.Expect(")");
    }
  }
  if (scan.Consume("<-")) {
    scan.Expect("[");
    if (!scan.Consume("]")) {
      do {
        step.deps.push_back(scan.Integer());
      } while (scan.Consume(","));
      scan.Expect("]");
    }
  }
  if (!scan.AtEnd()) scan.Fail("unexpected trailing text");
  return step;
}

bool ArityHolds(const Step& s, std::string* why) {
  const std::size_t n = s.deps.size();
  switch (s.kind) {
    case OpKind::kSelect:
      if (n != 0) { *why = "select takes no dependencies"; return false; }
      if (!s.category) { *why = "select needs a category"; return false; }
      return true;
    case OpKind::kFilter:
    case OpKind::kQuery:
    case OpKind::kVerify:
      if (n != 1) {
        *why = std::string(OpKindName(s.kind)) + " needs exactly 1 dependency";
        return false;
      }
      if (!s.attribute) {
        *why = std::string(OpKindName(s.kind)) + " needs an attribute";
        return false;
      }
      return true;
    case OpKind::kRelate:
      if (n != 1) { *why = "relate needs exactly 1 dependency"; return false; }
      if (!s.category || !s.relation) {
        *why = "relate needs a category and a relation";
        return false;
      }
      return true;
    case OpKind::kCompare:
      if (!s.attribute) { *why = "compare needs an attribute"; return false; }
      [[fallthrough]];
    case OpKind::kAnd:
    case OpKind::kOr:
      if (n < 2) {
        *why = std::string(OpKindName(s.kind)) + " needs at least 2 dependencies";
        return false;
      }
      return true;
  }
  return false;
}

}  // namespace

std::vector<ProgramViolation> ValidateProgram(const ReasoningProgram& program) {
  std::vector<ProgramViolation> out;
  const int n = static_cast<int>(program.steps.size());
  if (n == 0) {
    out.push_back({-1, ProgramRule::kEmpty, "program has no steps"});
    return out;
  }
  for (int i = 0; i < n; ++i) {
    const Step& s = program.steps[static_cast<std::size_t>(i)];
    if (s.index != i) {
      out.push_back({i, ProgramRule::kIndexMismatch,
                     "stored index " + std::to_string(s.index)});
    }
    std::string why;
    if (!ArityHolds(s, &why)) out.push_back({i, ProgramRule::kArity, why});
    for (int d : s.deps) {
      if (d < 0 || d >= n) {
        out.push_back({i, ProgramRule::kDependencyOutOfRange,
                       "dependency " + std::to_string(d) + " does not exist"});
      } else if (d >= i) {
        out.push_back({i, ProgramRule::kForwardDependency,
                       "depends on step " + std::to_string(d)});
      }
    }
  }
  std::vector<bool> reached(static_cast<std::size_t>(n), false);
  std::vector<int> stack = {n - 1};
  reached.back() = true;
  while (!stack.empty()) {
    const int i = stack.back();
    stack.pop_back();
    for (int d : program.steps[static_cast<std::size_t>(i)].deps) {
      if (d >= 0 && d < n && !reached[static_cast<std::size_t>(d)]) {
        reached[static_cast<std::size_t>(d)] = true;
        stack.push_back(d);
      }
    }
  }
  for (int i = 0; i < n; ++i) {
    if (!reached[static_cast<std::size_t>(i)]) {
      out.push_back({i, ProgramRule::kUnreachable,
                     "not reachable from the final step"});
    }
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const auto& a, const auto& b) { return a.step < b.step; });
  return out;
}

ReasoningProgram ParseProgram(std::string_view text) {
  ReasoningProgram program;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    ++line_no;
    const std::string trimmed = NormalizeToken(line);
    if (!trimmed.empty() && trimmed.front() != '#') {
      program.steps.push_back(ParseStepLine(
          line, line_no, static_cast<int>(program.steps.size())));
    }
    start = end + 1;
  }
  auto violations = ValidateProgram(program);
  if (!violations.empty()) throw ProgramError(violations.front());
  return program;
}

std::string SerializeProgram(const ReasoningProgram& program) {
  std::ostringstream out;
  for (const Step& s : program.steps) {
    out << s.index << ": " << OpKindName(s.kind);
    std::vector<std::string> args;
    if (s.category) args.push_back("category=" + *s.category);
    if (s.attribute) args.push_back("attribute=" + *s.attribute);
    if (s.relation) args.push_back("relation=" + *s.relation);
    if (!args.empty()) {
      out << '(';
      for (std::size_t i = 0; i < args.size(); ++i) {
        out << (i ? ", " : "") << args[i];
      }
      out << ')';
    }
    if (!s.deps.empty()) {
      out << " <- [";
      for (std::size_t i = 0; i < s.deps.size(); ++i) {
        out << (i ? "," : "") << s.deps[i];
      }
      out << ']';
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace reasonattn
