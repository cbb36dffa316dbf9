#ifndef MALICE_IO_HPP
#define MALICE_IO_HPP

#include <iosfwd>
#include <string>

#include "malice/core.hpp"

namespace malice {

/// Shortest decimal string that round-trips the double exactly.
std::string format_double(double v);
double parse_double(const std::string& s);

// Dataset CSV: header x_0,...,x_{d-1},y,provenance with provenance in
// {clean,dirty}. Round-trips bit-exactly at double precision.
void write_dataset_csv(const Dataset& data, std::ostream& os);
void write_dataset_csv(const Dataset& data, const std::string& path);
Dataset read_dataset_csv(std::istream& is);
Dataset read_dataset_csv(const std::string& path);

// JSON-lines variant: one object per line with fields x (array), y (int),
// prov (string).
void write_dataset_jsonl(const Dataset& data, std::ostream& os);
void write_dataset_jsonl(const Dataset& data, const std::string& path);
Dataset read_dataset_jsonl(std::istream& is);
Dataset read_dataset_jsonl(const std::string& path);

// Weight vectors as a single-column CSV with header q.
void write_weights_csv(const WeightVector& q, const std::string& path);
WeightVector read_weights_csv(const std::string& path);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace malice

#endif
