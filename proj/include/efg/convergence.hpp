#pragma once

// Convergence-curve records and their CSV form. Files carry '#'-prefixed
// key=value metadata comment lines (game, algorithm, config echo) before the
// header row. Reals are serialized with 17 significant digits so that
// parse(write(records)) == records exactly.

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace efg {

struct ConvergenceRecord {
  long long iteration = 0;
  double nashconv = 0.0;
  double exploitability_p0 = 0.0;
  double exploitability_p1 = 0.0;
  std::optional<double> best_iter_nashconv;  // ED / CFR-BR only
  double value_p0 = 0.0;
  long long wall_ms = 0;

  friend bool operator==(const ConvergenceRecord&, const ConvergenceRecord&) = default;
};

inline constexpr const char* kCsvHeader =
    "iteration,nashconv,exploitability_p0,exploitability_p1,best_iter_nashconv,value_p0,wall_ms";

inline std::string format_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

inline std::string to_csv_row(const ConvergenceRecord& r) {
  std::string row = std::to_string(r.iteration);
  row += ',';
  row += format_real(r.nashconv);
  row += ',';
  row += format_real(r.exploitability_p0);
  row += ',';
  row += format_real(r.exploitability_p1);
  row += ',';
  if (r.best_iter_nashconv) row += format_real(*r.best_iter_nashconv);
  row += ',';
  row += format_real(r.value_p0);
  row += ',';
  row += std::to_string(r.wall_ms);
  return row;
}

// Insertion-ordered metadata so files are byte-stable.
using CsvMetadata = std::vector<std::pair<std::string, std::string>>;

inline void write_csv(std::ostream& out, const std::vector<ConvergenceRecord>& records,
                      const CsvMetadata& metadata) {
  for (const auto& [key, value] : metadata) {
    out << "# " << key << "=" << value << "\n";
  }
  out << kCsvHeader << "\n";
  for (const ConvergenceRecord& r : records) {
    out << to_csv_row(r) << "\n";
  }
}

inline void write_csv(const std::string& path, const std::vector<ConvergenceRecord>& records,
                      const CsvMetadata& metadata) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path + " for writing");
  write_csv(f, records, metadata);
}

struct CsvDocument {
  CsvMetadata metadata;
  std::string header;
  std::vector<ConvergenceRecord> records;

  std::string meta(const std::string& key) const {
    for (const auto& [k, v] : metadata) {
      if (k == key) return v;
    }
    return {};
  }
};

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  for (char c : line) {
    if (c == ',') {
      out.push_back(field);
      field.clear();
    } else {
      field += c;
    }
  }
  out.push_back(field);
  return out;
}

inline CsvDocument parse_csv(std::istream& in) {
  CsvDocument doc;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::string body = line.substr(1);
      if (!body.empty() && body[0] == ' ') body = body.substr(1);
      const size_t eq = body.find('=');
      if (eq != std::string::npos) {
        doc.metadata.push_back({body.substr(0, eq), body.substr(eq + 1)});
      }
      continue;
    }
    if (doc.header.empty()) {
      doc.header = line;
      continue;
    }
    const std::vector<std::string> fields = split_csv_line(line);
    if (fields.size() != 7) {
      throw std::runtime_error("malformed CSV row: " + line);
    }
    ConvergenceRecord r;
    r.iteration = std::stoll(fields[0]);
    r.nashconv = std::strtod(fields[1].c_str(), nullptr);
    r.exploitability_p0 = std::strtod(fields[2].c_str(), nullptr);
    r.exploitability_p1 = std::strtod(fields[3].c_str(), nullptr);
    if (!fields[4].empty()) r.best_iter_nashconv = std::strtod(fields[4].c_str(), nullptr);
    r.value_p0 = std::strtod(fields[5].c_str(), nullptr);
    r.wall_ms = std::stoll(fields[6]);
    doc.records.push_back(r);
  }
  if (doc.header.empty()) throw std::runtime_error("CSV without a header row");
  return doc;
}

inline CsvDocument load_csv(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path);
  return parse_csv(f);
}

// Merges per-run files into one long-format table with leading `algorithm`
// and `game` columns taken from each file's metadata comments. A file
// without an algorithm comment falls back to its filename stem.
inline std::string merge_csv_documents(const std::vector<CsvDocument>& docs,
                                       const std::vector<std::string>& fallback_names) {
  if (docs.empty()) throw std::invalid_argument("no input files to merge");
  std::ostringstream out;
  out << "algorithm,game," << kCsvHeader << "\n";
  for (size_t i = 0; i < docs.size(); ++i) {
    if (docs[i].header != kCsvHeader) {
      throw std::runtime_error("schema mismatch in input " + fallback_names[i]);
    }
    std::string algorithm = docs[i].meta("algorithm");
    if (algorithm.empty()) {
      // Filename stem fallback.
      std::string stem = fallback_names[i];
      const size_t slash = stem.find_last_of("/\\");
      if (slash != std::string::npos) stem = stem.substr(slash + 1);
      const size_t dot = stem.find_last_of('.');
      if (dot != std::string::npos) stem = stem.substr(0, dot);
      algorithm = stem;
    }
    const std::string game = docs[i].meta("game");
    for (const ConvergenceRecord& r : docs[i].records) {
      out << algorithm << ',' << game << ',' << to_csv_row(r) << "\n";
    }
  }
  return out.str();
}

}  // namespace efg
