#include "crimenet/csv.hpp"

namespace crimenet {

CsvReader::CsvReader(std::istream& in) : in_(in) {
  read_record(header_);
  // Strip a UTF-8 BOM if the export carries one.
  if (!header_.empty() && header_[0].size() >= 3 && header_[0].compare(0, 3, "\xEF\xBB\xBF") == 0) {
    header_[0].erase(0, 3);
  }
}

int CsvReader::column(const std::string& name) const {
  for (size_t i = 0; i < header_.size(); ++i) {
    if (header_[i] == name) return static_cast<int>(i);
  }
  return -1;
}

std::vector<int> CsvReader::require_columns(const std::vector<std::string>& names) const {
  std::vector<int> cols;
  cols.reserve(names.size());
  for (const auto& name : names) {
    int c = column(name);
    if (c < 0) throw MissingColumn(name);
    cols.push_back(c);
  }
  return cols;
}

bool CsvReader::next(std::vector<std::string>& fields) { return read_record(fields); }

bool CsvReader::read_record(std::vector<std::string>& fields) {
  fields.clear();
  int ch = in_.get();
  if (ch == std::istream::traits_type::eof()) return false;

  std::string field;
  bool quoted = false;
  while (true) {
    if (ch == std::istream::traits_type::eof()) {
      fields.push_back(std::move(field));
      return true;
    }
    char c = static_cast<char>(ch);
    if (quoted) {
      if (c == '"') {
        int peek = in_.peek();
        if (peek == '"') {
          field.push_back('"');
          in_.get();
        } else {
          quoted = false;
        }
      } else {
        field.push_back(c);
      }
    } else if (c == '"' && field.empty()) {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else if (c == '\n') {
      fields.push_back(std::move(field));
      return true;
    } else if (c == '\r') {
      // swallow; the following '\n' (if any) ends the record
      if (in_.peek() == '\n') {
        in_.get();
        fields.push_back(std::move(field));
        return true;
      }
    } else {
      field.push_back(c);
    }
    ch = in_.get();
  }
}

}  // namespace crimenet
