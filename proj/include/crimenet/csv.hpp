#pragma once

#include <istream>
#include <string>
#include <vector>

#include "crimenet/errors.hpp"

namespace crimenet {

// Minimal RFC-4180-style CSV reader: quoted fields, doubled quotes, CRLF
// line endings. Header names are matched case-sensitively.
class CsvReader {
 public:
  explicit CsvReader(std::istream& in);

  const std::vector<std::string>& header() const { return header_; }

  // Column position for a header name, -1 when absent.
  int column(const std::string& name) const;

  // Positions for required columns; throws MissingColumn naming the first
  // absent one.
  std::vector<int> require_columns(const std::vector<std::string>& names) const;

  // Reads the next record into fields. Returns false at end of input.
  bool next(std::vector<std::string>& fields);

 private:
  bool read_record(std::vector<std::string>& fields);

  std::istream& in_;
  std::vector<std::string> header_;
};

}  // namespace crimenet
