#pragma once

// JSON bindings for every report type. Integers serialize as decimal
// strings so arbitrary precision survives any consumer; parsers accept
// plain JSON numbers as a convenience.

#include <string>
#include <vector>

#include <json.hpp>

#include "radixtiles/beta.hpp"
#include "radixtiles/radix.hpp"
#include "radixtiles/spectral.hpp"
#include "radixtiles/tile.hpp"
#include "radixtiles/wavelet.hpp"

namespace radixtiles::io {

using nlohmann::json;

inline json int_to_json(const Int& v) { return int_to_string(v); }

inline Int int_from_json(const json& j) {
  if (j.is_string()) return int_from_string(j.get<std::string>());
  if (j.is_number_integer()) return Int(j.get<long long>());
  throw std::invalid_argument("expected an integer (as decimal string or number): " + j.dump());
}

inline json vector_to_json(const IntVector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(int_to_json(v(i)));
  return out;
}

inline IntVector vector_from_json(const json& j) {
  if (!j.is_array() || j.empty())
    throw std::invalid_argument("expected a non-empty array for a vector: " + j.dump());
  IntVector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = int_from_json(j[i]);
  return v;
}

inline json matrix_to_json(const IntMatrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(int_to_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline IntMatrix matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty())
    throw std::invalid_argument("expected a non-empty array of rows for a matrix: " + j.dump());
  const auto n = j.size();
  IntMatrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    if (!j[i].is_array() || j[i].size() != n)
      throw std::invalid_argument("matrix must be square with equal-length rows: " + j.dump());
    for (std::size_t k = 0; k < n; ++k)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = int_from_json(j[i][k]);
  }
  return m;
}

inline json to_json(const spectral::SpectralReport& r) {
  json coeffs = json::array();
  for (const auto& c : r.char_poly) coeffs.push_back(int_to_json(c));
  return json{{"q", int_to_json(r.q)},
              {"is_dilation", r.is_dilation},
              {"mu_exceeds_two", r.mu_exceeds_two},
              {"mu_estimate", r.mu_estimate},
              {"char_poly", std::move(coeffs)}};
}

inline json to_json(const digits::DigitSet& d) {
  json digs = json::array();
  for (const auto& dig : d.digits) digs.push_back(vector_to_json(dig));
  return json{{"matrix", matrix_to_json(d.matrix)},
              {"digits", std::move(digs)},
              {"canonical", d.canonical}};
}

inline json to_json(const radix::RadixExpansion& e) {
  json digs = json::array();
  for (const auto& d : e.digits) digs.push_back(vector_to_json(d));
  json status;
  if (e.status == radix::RadixExpansion::Status::Terminated) {
    status = json{{"kind", "terminated"}, {"length", e.digits.size()}};
  } else {
    json states = json::array();
    for (const auto& s : e.cycle_states) states.push_back(vector_to_json(s));
    status = json{{"kind", "cycle"},
                  {"entry_index", e.entry_index},
                  {"period", e.period},
                  {"cycle_states", std::move(states)}};
  }
  return json{{"input", vector_to_json(e.input)},
              {"digits", std::move(digs)},
              {"status", std::move(status)}};
}

inline json to_json(const radix::DecisionReport& r) {
  json witnesses = json::array();
  for (const auto& w : r.witnesses) {
    json cyc = json::array();
    for (const auto& s : w.cycle) cyc.push_back(vector_to_json(s));
    witnesses.push_back(json{{"state", vector_to_json(w.state)}, {"cycle", std::move(cyc)}});
  }
  return json{{"yields", r.yields},
              {"ball_radius", r.ball_radius},
              {"points_checked", r.points_checked},
              {"m_contraction", r.m_contraction},
              {"max_expansion_steps", r.max_expansion_steps},
              {"witnesses", std::move(witnesses)}};
}

inline json to_json(const tile::MultiplicityEstimate& e) {
  return json{{"sample_count", e.sample_count},
              {"mean_multiplicity", e.mean_multiplicity},
              {"min", e.min},
              {"max", e.max},
              {"depth", e.depth},
              {"seed", e.seed}};
}

inline json to_json(const tile::MembershipCertificate& c) {
  json out{{"verdict", c.verdict == tile::MembershipCertificate::Verdict::Outside ? "outside"
                                                                                  : "candidate"},
           {"depth_used", c.depth_used}};
  if (c.verdict == tile::MembershipCertificate::Verdict::Candidate)
    out["distance_bound"] = c.distance_bound;
  return out;
}

inline const char* to_string(tile::InteriorVerdict v) {
  switch (v) {
    case tile::InteriorVerdict::InteriorByTheorem: return "InteriorByTheorem";
    case tile::InteriorVerdict::BoundaryByTheorem: return "BoundaryByTheorem";
    case tile::InteriorVerdict::LikelyInterior: return "LikelyInterior";
    case tile::InteriorVerdict::LikelyBoundary: return "LikelyBoundary";
    case tile::InteriorVerdict::Inconclusive: return "Inconclusive";
  }
  return "Inconclusive";
}

inline json to_json(const wavelet::RefinementReport& r) {
  return json{{"samples", r.samples}, {"included", r.included}, {"passed", r.passed},
              {"seed", r.seed},       {"depth", r.depth},       {"pass_rate", r.pass_rate}};
}

inline json to_json(const wavelet::OrthonormalityReport& r) {
  json table = json::array();
  for (const auto& [k, est] : r.table) {
    json kv = json::array();
    for (auto c : k) kv.push_back(c);
    table.push_back(json{{"k", std::move(kv)}, {"overlap", est}});
  }
  return json{{"samples", r.samples},
              {"depth", r.depth},
              {"seed", r.seed},
              {"self_inner_product", r.self_inner_product},
              {"max_offdiagonal", r.max_offdiagonal},
              {"table", std::move(table)}};
}

inline json to_json(const wavelet::MRAReport& r) {
  return json{{"beta", r.beta},
              {"mu_power", r.mu_power},
              {"digit_set", to_json(r.digit_set)},
              {"decision", to_json(r.decision)},
              {"refinement", to_json(r.refinement)},
              {"orthonormality", to_json(r.orthonormality)},
              {"verdict", r.verdict},
              {"mra_axioms", wavelet::MRAReport::kAxiomNote}};
}

inline json to_json(const spectral::BetaSearch& b) {
  return json{{"beta", b.beta},
              {"mu_power", b.mu_power},
              {"digit_set", to_json(b.digit_set)},
              {"decision", to_json(b.decision)}};
}

}  // namespace radixtiles::io
