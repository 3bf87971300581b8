#include "io/csv.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace algdiff {
namespace {

void append_value(std::string& out, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out += buf;
}

}  // namespace

std::string to_csv(const SimTrace& trace) {
  std::string out = "t";
  for (const auto& n : trace.names()) {
    out += ',';
    out += n;
  }
  out += '\n';
  const std::size_t rows = trace.size();
  for (std::size_t r = 0; r < rows; ++r) {
    append_value(out, trace.time()[r]);
    for (const auto& n : trace.names()) {
      out += ',';
      append_value(out, trace.channel(n)[r]);
    }
    out += '\n';
  }
  return out;
}

void write_csv(const SimTrace& trace, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  f << to_csv(trace);
  if (!f) throw std::runtime_error("write failed: " + path);
}

SimTrace parse_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty CSV input");
  if (!line.empty() && line.back() == '\r') line.pop_back();

  std::vector<std::string> headers;
  {
    std::istringstream hs(line);
    std::string cell;
    while (std::getline(hs, cell, ',')) headers.push_back(cell);
  }
  if (headers.empty()) throw std::runtime_error("CSV header row is empty");

  std::vector<std::vector<double>> cols(headers.size());
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const char* p = line.c_str();
    for (std::size_t c = 0; c < headers.size(); ++c) {
      char* end = nullptr;
      const double v = std::strtod(p, &end);
      if (end == p)
        throw std::runtime_error("bad number at CSV row " + std::to_string(row));
      cols[c].push_back(v);
      p = end;
      if (c + 1 < headers.size()) {
        if (*p != ',')
          throw std::runtime_error("missing column at CSV row " + std::to_string(row));
        ++p;
      }
    }
  }

  SimTrace trace;
  trace.set_time(std::move(cols[0]));
  for (std::size_t c = 1; c < headers.size(); ++c)
    trace.add_channel(headers[c]) = std::move(cols[c]);
  return trace;
}

SimTrace read_csv(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open: " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_csv(ss.str());
}

}  // namespace algdiff
