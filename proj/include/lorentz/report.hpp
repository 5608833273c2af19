#pragma once

// Audit reports shared by the validators and checkers.

#include <cmath>
#include <cstdint>
#include <iomanip>
#include <limits>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace lorentz {

enum class Verdict { pass, fail, inconclusive };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    default: return "inconclusive";
  }
}

/// A witness is an ordered list of named numbers plus a short kind label.
struct Witness {
  std::string kind;
  std::vector<std::pair<std::string, double>> fields;

  Witness& add(std::string key, double value) {
    fields.emplace_back(std::move(key), value);
    return *this;
  }
};

struct Violation {
  Witness witness;
  double lhs = 0.0;
  double rhs = 0.0;
  double gap = 0.0;
};

/// One CSV row per sample: the worst comparison seen in it.
struct SampleRow {
  std::size_t index = 0;
  bool admissible = false;
  Violation worst;
};

struct CheckReport {
  std::string space;
  double k = 0.0;
  std::string bound = "below";
  std::string variant;
  std::size_t samples = 0;
  std::size_t admissible = 0;
  std::uint64_t seed = 0;
  double tolerance = 0.0;
  std::vector<Violation> violations;
  Verdict verdict = Verdict::inconclusive;

  std::size_t violation_count = 0;  ///< including those not stored
  double max_gap = -std::numeric_limits<double>::infinity();
  std::vector<SampleRow> rows;
};

/// Fail on any stored violation, else inconclusive below the admissible
/// minimum, else pass.
inline Verdict decide(const CheckReport& r, std::size_t min_admissible) {
  if (r.violation_count > 0) return Verdict::fail;
  if (r.admissible < min_admissible) return Verdict::inconclusive;
  return Verdict::pass;
}

/// Keeps the largest gaps, in sample order for equal gaps.
inline void keep_worst(std::vector<Violation>& kept, Violation v, std::size_t cap) {
  kept.push_back(std::move(v));
  if (kept.size() <= cap) return;
  std::size_t weakest = 0;
  for (std::size_t i = 1; i < kept.size(); ++i)
    if (kept[i].gap < kept[weakest].gap) weakest = i;
  kept.erase(kept.begin() + static_cast<std::ptrdiff_t>(weakest));
}

namespace detail {

inline std::string csv_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os << std::setprecision(17) << (v == 0.0 ? 0.0 : v);
  return os.str();
}

}  // namespace detail

/// CSV columns: sample,admissible,kind,witness,lhs,rhs,gap.  The witness
/// column holds key=value pairs separated by ';'.
inline std::string report_csv(const CheckReport& r) {
  std::string out = "sample,admissible,kind,witness,lhs,rhs,gap\n";
  for (const auto& row : r.rows) {
    std::string w;
    for (const auto& [key, value] : row.worst.witness.fields) {
      if (!w.empty()) w += ';';
      w += key + "=" + detail::csv_number(value);
    }
    out += std::to_string(row.index) + "," + (row.admissible ? "1" : "0") + "," + row.worst.witness.kind + "," + w +
           "," + detail::csv_number(row.worst.lhs) + "," + detail::csv_number(row.worst.rhs) + "," +
           detail::csv_number(row.worst.gap) + "\n";
  }
  return out;
}

}  // namespace lorentz
