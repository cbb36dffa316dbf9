#ifndef MALICE_REPORT_HPP
#define MALICE_REPORT_HPP

#include <string>
#include <vector>

namespace malice {

/// One lemma-level numerical verdict. Every entry carries both sides of the
/// inequality it checked so a report is auditable without rerunning.
struct CertificateEntry {
  std::string check_id;
  bool pass = false;
  double lhs = 0.0;
  double rhs = 0.0;
  std::string detail;

  static CertificateEntry skipped(std::string check_id, std::string why);
};

struct CertificateReport {
  std::vector<CertificateEntry> entries;

  void append(CertificateEntry e) { entries.push_back(std::move(e)); }
  void append(const CertificateReport& other);
  bool all_pass() const;
  std::size_t failure_count() const;
};

}  // namespace malice

#endif
