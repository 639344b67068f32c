#pragma once

#include <cstddef>
#include <fstream>
#include <istream>
#include <string>

#include <json.hpp>

#include "longeval/error.hpp"
#include "longeval/text.hpp"

namespace longeval {

/// Calls `fn(record, line_no)` for each non-blank line of a JSON-lines stream.
/// Parse failures and exceptions thrown by `fn` surface as ParseError with the
/// 1-based line number.
template <typename Fn>
void for_each_jsonl(std::istream& in, const std::string& source, Fn&& fn) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    nlohmann::json record;
    try {
      record = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(source, line_no, e.what());
    }
    try {
      fn(record, line_no);
    } catch (const ParseError&) {
      throw;
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(source, line_no, e.what());
    } catch (const ValidationError& e) {
      throw ParseError(source, line_no, e.what());
    }
  }
}

template <typename Fn>
void for_each_jsonl_file(const std::string& path, Fn&& fn) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  for_each_jsonl(in, path, std::forward<Fn>(fn));
}

}  // namespace longeval
