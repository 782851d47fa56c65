#include <charconv>
#include <cmath>
#include <cstdio>

#include "speechpanel/errors.hpp"
#include "speechpanel/io.hpp"
#include "speechpanel/pipeline.hpp"

namespace speechpanel {
namespace {

std::string format_value(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

bool plain_cell(std::string_view s) { return s.find_first_of(",\"\r\n") == std::string_view::npos; }

std::vector<std::string_view> split_row(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      cells.push_back(line.substr(start));
      return cells;
    }
    cells.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

}  // namespace

std::string format_table(const std::vector<FeaturePanel>& panels) {
  std::string out = "subject_id";
  const std::vector<std::string>* names = panels.empty() ? nullptr : &panels.front().names;
  if (names) {
    for (const auto& n : *names) out += "," + n;
  }
  out += ",group,sspa_overall\n";
  for (const auto& p : panels) {
    if (p.names != *names) throw FormatError("subject " + p.subject_id + ": feature columns differ from the first row");
    if (!plain_cell(p.subject_id)) throw FormatError("subject_id '" + p.subject_id + "' contains a separator");
    out += p.subject_id;
    for (double v : p.values) out += "," + format_value(v);
    out += ",";
    if (p.group) out += to_string(*p.group);
    out += ",";
    if (p.sspa_overall) out += format_value(*p.sspa_overall);
    out += "\n";
  }
  return out;
}

std::vector<FeaturePanel> parse_table(std::string_view text, const std::string& source) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    start = end + 1;
  }
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  if (lines.empty()) throw FormatError(source + ": missing header row");

  const auto header = split_row(lines.front());
  if (header.size() < 3 || header.front() != "subject_id" || header[header.size() - 2] != "group" ||
      header.back() != "sspa_overall") {
    throw FormatError(source + ":1: header must be subject_id,<features...>,group,sspa_overall");
  }
  std::vector<std::string> names(header.begin() + 1, header.end() - 2);

  std::vector<FeaturePanel> panels;
  for (std::size_t r = 1; r < lines.size(); ++r) {
    const std::string row = source + ":" + std::to_string(r + 1);
    const auto cells = split_row(lines[r]);
    if (cells.size() != header.size()) {
      throw FormatError(row + ": expected " + std::to_string(header.size()) + " columns, found " +
                        std::to_string(cells.size()));
    }
    FeaturePanel p;
    p.subject_id = std::string(cells.front());
    if (p.subject_id.empty()) throw FormatError(row + ": empty subject_id");
    p.names = names;
    p.values.resize(names.size());
    for (std::size_t c = 0; c < names.size(); ++c) {
      std::string_view cell = cells[c + 1];
      double v = 0;
      auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (cell.empty() || ec != std::errc() || ptr != cell.data() + cell.size() || !std::isfinite(v)) {
        throw FormatError(row + ", column " + names[c] + ": non-numeric value '" + std::string(cell) + "'");
      }
      p.values[c] = v;
    }
    const std::string_view g = cells[cells.size() - 2];
    if (!g.empty()) {
      p.group = parse_group(g);
      if (!p.group) throw FormatError(row + ", column group: unknown group '" + std::string(g) + "'");
    }
    const std::string_view s = cells.back();
    if (!s.empty()) {
      double v = 0;
      auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
      if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
        throw FormatError(row + ", column sspa_overall: non-numeric value '" + std::string(s) + "'");
      }
      p.sspa_overall = v;
    }
    panels.push_back(std::move(p));
  }
  return panels;
}

void write_table(const std::vector<FeaturePanel>& panels, const std::filesystem::path& path) {
  write_file_atomic(path, format_table(panels));
}

std::vector<FeaturePanel> read_table(const std::filesystem::path& path) {
  return parse_table(read_text_file(path), path.string());
}

}  // namespace speechpanel
