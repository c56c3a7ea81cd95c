#include "stabent/bounds.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>

#include <nlohmann/json.hpp>

#include "stabent/errors.hpp"

namespace stabent {

namespace {

std::string family_label(MagicFamily f, int m) {
  switch (f) {
    case MagicFamily::T: return "T";
    case MagicFamily::CkZ: return m == 3 ? "CCZ" : "C" + std::to_string(m - 1) + "Z";
    case MagicFamily::CkS: return m == 2 ? "CS" : "C" + std::to_string(m - 1) + "S";
  }
  return "?";
}

}  // namespace

StateSpec StateSpec::named(MagicFamily f, int m) {
  StateSpec out;
  out.family = {f, m};
  out.label = family_label(f, m);
  return out;
}

StateSpec StateSpec::explicit_state(PureState psi, std::string label) {
  StateSpec out;
  out.state = std::move(psi);
  out.label = std::move(label);
  return out;
}

std::optional<StateSpec> StateSpec::parse(std::string_view text) {
  std::string lowered(text);
  for (char& c : lowered) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (lowered == "t") return named(MagicFamily::T, 1);
  if (lowered == "cs") return named(MagicFamily::CkS, 2);
  if (lowered == "ccz") return named(MagicFamily::CkZ, 3);
  const auto colon = lowered.find(':');
  if (colon != std::string::npos) {
    const std::string head = lowered.substr(0, colon);
    try {
      const int m = std::stoi(lowered.substr(colon + 1));
      if (head == "ckz") return named(MagicFamily::CkZ, m);
      if (head == "cks") return named(MagicFamily::CkS, m);
    } catch (const std::logic_error&) {
      return std::nullopt;
    }
  }
  return std::nullopt;
}

double StateSpec::purity(int alpha) const {
  if (family) return rational_to_double(closed_form_purity(family->first, family->second, alpha));
  if (state) return stabilizer_purity(*state, static_cast<double>(alpha));
  throw ValidationError("empty StateSpec");
}

double StateSpec::entropy_bits(int alpha) const {
  return std::log2(purity(alpha)) / (1.0 - alpha);
}

std::optional<Rational> StateSpec::exact_purity(int alpha) const {
  if (!family) return std::nullopt;
  return closed_form_purity(family->first, family->second, alpha);
}

double rate_bound(const StateSpec& source, const StateSpec& target, int alpha) {
  if (alpha < 2) throw ValidationError("conversion bounds require integer alpha >= 2");
  const double m_target = target.entropy_bits(alpha);
  if (m_target < 1e-12) {
    throw ValidationError("target " + target.label +
                          " has zero stabilizer entropy; conversion to free states is unconstrained");
  }
  return source.entropy_bits(alpha) / m_target;
}

double prob_bound(const StateSpec& source, const StateSpec& target, int alpha) {
  if (alpha < 2) throw ValidationError("conversion bounds require integer alpha >= 2");
  const double lin_target = 1.0 - target.purity(alpha);
  if (lin_target < 1e-12) {
    throw ValidationError("target " + target.label + " is a stabilizer state");
  }
  return std::min(1.0, (1.0 - source.purity(alpha)) / lin_target);
}

double round_up_one_decimal(double x) { return std::ceil(x * 10.0 - 1e-12) / 10.0; }

BoundReport make_bound_report(const StateSpec& source, const StateSpec& target, int alpha) {
  BoundReport r;
  r.source = source.label;
  r.target = target.label;
  r.alpha = alpha;
  r.rate_bound = rate_bound(source, target, alpha);
  r.prob_bound = prob_bound(source, target, alpha);
  r.rate_rounded_up = round_up_one_decimal(r.rate_bound);
  if (auto p = source.exact_purity(alpha)) r.source_purity_exact = rational_to_string(*p);
  if (auto p = target.exact_purity(alpha)) r.target_purity_exact = rational_to_string(*p);
  return r;
}

std::vector<BoundReport> conversion_bound_table(int alpha, int n_lo, int n_hi) {
  if (n_lo < 3 || n_hi < n_lo) throw ValidationError("bound table needs 3 <= n_lo <= n_hi");
  std::vector<BoundReport> table;
  const StateSpec targets[3] = {StateSpec::named(MagicFamily::T, 1),
                                StateSpec::named(MagicFamily::CkS, 2),
                                StateSpec::named(MagicFamily::CkZ, 3)};
  for (int n = n_lo; n <= n_hi; ++n) {
    for (MagicFamily f : {MagicFamily::CkZ, MagicFamily::CkS}) {
      for (const StateSpec& target : targets) {
        table.push_back(make_bound_report(StateSpec::named(f, n), target, alpha));
      }
    }
  }
  // Headline single-number bounds (0.9 / 0.5 / 0.8 / 0.5 at alpha = 2).
  const std::pair<MagicFamily, int> headliners[4] = {
      {MagicFamily::CkZ, 4}, {MagicFamily::CkZ, 5}, {MagicFamily::CkS, 3}, {MagicFamily::CkS, 4}};
  for (const auto& [f, m] : headliners) {
    BoundReport r = make_bound_report(StateSpec::named(f, m), StateSpec::named(MagicFamily::CkZ, 3), alpha);
    r.headline = true;
    table.push_back(std::move(r));
  }
  return table;
}

std::string bounds_to_json(const std::vector<BoundReport>& table) {
  nlohmann::json rows = nlohmann::json::array();
  for (const BoundReport& r : table) {
    nlohmann::json row{{"source", r.source},
                       {"target", r.target},
                       {"alpha", r.alpha},
                       {"rate_bound", r.rate_bound},
                       {"prob_bound", r.prob_bound},
                       {"rate_rounded_up", r.rate_rounded_up},
                       {"headline", r.headline}};
    if (!r.source_purity_exact.empty()) row["source_purity_exact"] = r.source_purity_exact;
    if (!r.target_purity_exact.empty()) row["target_purity_exact"] = r.target_purity_exact;
    rows.push_back(std::move(row));
  }
  return rows.dump();
}

std::string bounds_to_text(const std::vector<BoundReport>& table) {
  std::ostringstream os;
  os << std::left << std::setw(8) << "source" << std::setw(8) << "target" << std::right
     << std::setw(6) << "alpha" << std::setw(16) << "rate<=" << std::setw(10) << "(1dp)"
     << std::setw(16) << "prob<=" << "\n";
  for (const BoundReport& r : table) {
    os << std::left << std::setw(8) << r.source << std::setw(8) << r.target << std::right
       << std::setw(6) << r.alpha << std::setw(16) << std::setprecision(6) << std::fixed
       << r.rate_bound << std::setw(10) << std::setprecision(1) << r.rate_rounded_up
       << std::setw(16) << std::setprecision(6) << r.prob_bound;
    os.unsetf(std::ios::fixed);
    if (r.headline) os << "  *";
    os << "\n";
  }
  return os.str();
}

}  // namespace stabent
