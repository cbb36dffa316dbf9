#include "malice/report.hpp"

namespace malice {

CertificateEntry CertificateEntry::skipped(std::string check_id,
                                           std::string why) {
  CertificateEntry e;
  e.check_id = std::move(check_id);
  e.pass = true;
  e.detail = "skipped: " + std::move(why);
  return e;
}

void CertificateReport::append(const CertificateReport& other) {
  entries.insert(entries.end(), other.entries.begin(), other.entries.end());
}

bool CertificateReport::all_pass() const {
  for (const auto& e : entries) {
    if (!e.pass) return false;
  }
  return true;
}

std::size_t CertificateReport::failure_count() const {
  std::size_t n = 0;
  for (const auto& e : entries) {
    if (!e.pass) ++n;
  }
  return n;
}

}  // namespace malice
