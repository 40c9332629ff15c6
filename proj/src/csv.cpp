#include "skewboost/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

#include "skewboost/errors.hpp"

namespace skewboost {

namespace {

std::string trim(std::string_view cell) {
  const char* whitespace = " \t\r";
  std::size_t begin = cell.find_first_not_of(whitespace);
  if (begin == std::string_view::npos) {
    return "";
  }
  std::size_t end = cell.find_last_not_of(whitespace);
  return std::string(cell.substr(begin, end - begin + 1));
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t begin = 0;
  while (true) {
    std::size_t comma = line.find(',', begin);
    if (comma == std::string::npos) {
      fields.push_back(trim(std::string_view(line).substr(begin)));
      return fields;
    }
    fields.push_back(
        trim(std::string_view(line).substr(begin, comma - begin)));
    begin = comma + 1;
  }
}

double parse_cell(const std::string& cell, std::size_t line_number,
                  const std::string& column) {
  if (cell.empty()) {
    throw CsvError("line " + std::to_string(line_number) + ", column '" +
                   column + "': blank cell");
  }
  double value = 0.0;
  const char* begin = cell.data();
  const char* end = begin + cell.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || ptr != end) {
    throw CsvError("line " + std::to_string(line_number) + ", column '" +
                   column + "': cannot parse '" + cell + "' as a number");
  }
  if (!std::isfinite(value)) {
    throw CsvError("line " + std::to_string(line_number) + ", column '" +
                   column + "': value '" + cell + "' is not finite");
  }
  return value;
}

// Index of `name` in the header; exactly one occurrence required.
std::size_t locate_column(const std::vector<std::string>& header,
                          const std::string& name, const char* what) {
  std::size_t found = header.size();
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) {
      if (found != header.size()) {
        throw CsvError(std::string(what) + " column '" + name +
                       "' appears more than once in the header");
      }
      found = i;
    }
  }
  if (found == header.size()) {
    throw CsvError(std::string(what) + " column '" + name +
                   "' not found in the header");
  }
  return found;
}

}  // namespace

Dataset load_csv(const std::filesystem::path& path, const CsvSchema& schema) {
  std::ifstream in(path);
  if (!in) {
    throw FileError("cannot open '" + path.string() + "' for reading");
  }
  std::string line;
  if (!std::getline(in, line)) {
    throw CsvError("'" + path.string() + "': a header row is required");
  }
  std::vector<std::string> header = split_fields(line);

  std::size_t label_index = locate_column(header, schema.label_column, "label");
  std::size_t group_index = header.size();
  if (schema.group_column) {
    group_index = locate_column(header, *schema.group_column, "group");
    if (group_index == label_index) {
      throw CsvError("label and group schema name the same column '" +
                     schema.label_column + "'");
    }
  }
  std::vector<std::size_t> feature_columns;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i != label_index && i != group_index) {
      feature_columns.push_back(i);
    }
  }

  std::vector<double> values;
  std::vector<int> labels;
  std::vector<std::string> groups;
  std::size_t line_number = 1;
  while (std::getline(in, line)) {
    ++line_number;
    std::vector<std::string> fields = split_fields(line);
    if (fields.size() != header.size()) {
      throw CsvError("line " + std::to_string(line_number) + ": expected " +
                     std::to_string(header.size()) + " fields, got " +
                     std::to_string(fields.size()));
    }
    double label_value =
        parse_cell(fields[label_index], line_number, header[label_index]);
    if (label_value != 0.0 && label_value != 1.0) {
      throw CsvError("line " + std::to_string(line_number) + ", column '" +
                     header[label_index] + "': label must be 0 or 1, got '" +
                     fields[label_index] + "'");
    }
    labels.push_back(label_value == 1.0 ? 1 : 0);
    if (schema.group_column) {
      if (fields[group_index].empty()) {
        throw CsvError("line " + std::to_string(line_number) + ", column '" +
                       header[group_index] + "': blank group id");
      }
      groups.push_back(fields[group_index]);
    }
    for (std::size_t column : feature_columns) {
      values.push_back(parse_cell(fields[column], line_number, header[column]));
    }
  }

  if (labels.empty()) {
    throw CsvError("'" + path.string() + "': no data rows after the header");
  }

  Dataset data;
  data.features =
      Matrix(labels.size(), feature_columns.size(), std::move(values));
  data.labels = std::move(labels);
  data.group_ids = std::move(groups);
  return data;
}

}  // namespace skewboost
