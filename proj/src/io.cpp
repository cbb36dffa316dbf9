#include "malice/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <system_error>

#include <json.hpp>

namespace malice {

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  if (res.ec != std::errc()) {
    throw std::runtime_error("format_double: conversion failed");
  }
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& s) {
  double v = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc() || res.ptr != last) {
    throw std::runtime_error("parse_double: bad number '" + s + "'");
  }
  return v;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

const char* provenance_name(Provenance p) {
  return p == Provenance::Clean ? "clean" : "dirty";
}

Provenance provenance_from(const std::string& s) {
  if (s == "clean") return Provenance::Clean;
  if (s == "dirty") return Provenance::Dirty;
  throw std::runtime_error("unknown provenance '" + s + "'");
}

std::ofstream open_out(const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  return os;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open for reading: " + path);
  return is;
}

}  // namespace

void write_dataset_csv(const Dataset& data, std::ostream& os) {
  for (std::size_t j = 0; j < data.dim(); ++j) os << "x_" << j << ",";
  os << "y,provenance\n";
  for (const auto& s : data) {
    for (double c : s.x) os << format_double(c) << ",";
    os << s.y << "," << provenance_name(s.provenance) << "\n";
  }
}

void write_dataset_csv(const Dataset& data, const std::string& path) {
  auto os = open_out(path);
  write_dataset_csv(data, os);
}

Dataset read_dataset_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) {
    throw std::runtime_error("dataset csv: missing header");
  }
  const auto header = split_csv_line(line);
  if (header.size() < 3 || header[header.size() - 2] != "y" ||
      header.back() != "provenance") {
    throw std::runtime_error("dataset csv: malformed header");
  }
  const std::size_t d = header.size() - 2;
  Dataset data(d);
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != d + 2) {
      throw std::runtime_error("dataset csv: wrong field count");
    }
    LabeledSample s;
    s.x.resize(d);
    for (std::size_t j = 0; j < d; ++j) s.x[j] = parse_double(fields[j]);
    s.y = std::stoi(fields[d]);
    s.provenance = provenance_from(fields[d + 1]);
    data.add(std::move(s));
  }
  return data;
}

Dataset read_dataset_csv(const std::string& path) {
  auto is = open_in(path);
  return read_dataset_csv(is);
}

void write_dataset_jsonl(const Dataset& data, std::ostream& os) {
  for (const auto& s : data) {
    nlohmann::json j;
    j["x"] = s.x;
    j["y"] = s.y;
    j["prov"] = provenance_name(s.provenance);
    os << j.dump() << "\n";
  }
}

void write_dataset_jsonl(const Dataset& data, const std::string& path) {
  auto os = open_out(path);
  write_dataset_jsonl(data, os);
}

Dataset read_dataset_jsonl(std::istream& is) {
  Dataset data;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto j = nlohmann::json::parse(line);
    LabeledSample s;
    s.x = j.at("x").get<Vec>();
    s.y = j.at("y").get<int>();
    s.provenance = provenance_from(j.at("prov").get<std::string>());
    data.add(std::move(s));
  }
  return data;
}

Dataset read_dataset_jsonl(const std::string& path) {
  auto is = open_in(path);
  return read_dataset_jsonl(is);
}

void write_weights_csv(const WeightVector& q, const std::string& path) {
  auto os = open_out(path);
  os << "q\n";
  for (double v : q.q) os << format_double(v) << "\n";
}

WeightVector read_weights_csv(const std::string& path) {
  auto is = open_in(path);
  std::string line;
  if (!std::getline(is, line) || line != "q") {
    throw std::runtime_error("weights csv: malformed header");
  }
  WeightVector q;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    q.q.push_back(parse_double(line));
  }
  return q;
}

std::string read_text_file(const std::string& path) {
  auto is = open_in(path);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  auto os = open_out(path);
  os << content;
}

}  // namespace malice
