#pragma once

// Problem file schema (UTF-8 JSON) and report serialization. Reals survive a
// write/parse round trip bit-identically: serialization uses the shortest
// representation that parses back to the same double.

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cdt/cone_duality.hpp"
#include "cdt/dual.hpp"
#include "cdt/quadratic.hpp"
#include "cdt/spectral.hpp"
#include "cdt/triality.hpp"

namespace cdt {

using nlohmann::json;

struct ProblemDocument {
  std::string schema_version = "1";
  ProblemInstance instance;
  std::vector<Vec> seeds;  // optional Newton start vectors
};

namespace io_detail {

inline Vec vec_from_json(const json& j, int expected, const char* what) {
  require(j.is_array() && static_cast<int>(j.size()) == expected, ErrorCode::ParseError,
          std::string(what) + ": expected array of length " + std::to_string(expected));
  Vec v(expected);
  for (int i = 0; i < expected; ++i) {
    require(j[static_cast<size_t>(i)].is_number(), ErrorCode::ParseError,
            std::string(what) + ": expected numbers");
    v(i) = j[static_cast<size_t>(i)].get<double>();
  }
  return v;
}

inline json vec_to_json(const Vec& v) {
  json out = json::array();
  for (int i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

inline Mat mat_from_json(const json& j, int n, const char* what) {
  require(j.is_array() && static_cast<int>(j.size()) == n * n, ErrorCode::ParseError,
          std::string(what) + ": expected row-major array of length n*n");
  Mat a(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) {
      const auto& e = j[static_cast<size_t>(r * n + c)];
      require(e.is_number(), ErrorCode::ParseError, std::string(what) + ": expected numbers");
      a(r, c) = e.get<double>();
    }
  return a;
}

inline json mat_to_json(const Mat& a) {
  json out = json::array();
  for (int r = 0; r < a.rows(); ++r)
    for (int c = 0; c < a.cols(); ++c) out.push_back(a(r, c));
  return out;
}

inline CanonicalFunction v_from_json(const json& jv, int m) {
  require(jv.is_object() && jv.contains("kind") && jv["kind"].is_string(), ErrorCode::ParseError,
          "v: expected object with string field 'kind'");
  const std::string kind = jv["kind"].get<std::string>();
  const json params = jv.value("params", json::object());
  try {
    if (kind == "QuadraticDiag")
      return make_quadratic_diag(vec_from_json(params.at("beta"), m, "v.params.beta"));
    if (kind == "Exponential") return make_exponential(m);
    if (kind == "ExpPlusQuad") {
      const int p = params.at("p").get<int>();
      return make_exp_plus_quad(m, p, vec_from_json(params.at("beta"), m - p, "v.params.beta"));
    }
    if (kind == "LogSumExpPlusQuad") {
      const int p = params.at("p").get<int>();
      return make_log_sum_exp(m, p, params.at("beta_scale").get<double>(),
                              vec_from_json(params.at("beta"), m - p, "v.params.beta"));
    }
    if (kind == "IndicatorCone") {
      std::vector<int> J;
      for (const auto& e : params.value("J", json::array())) J.push_back(e.get<int>());
      return make_indicator_cone(m, std::move(J));
    }
  } catch (const json::exception& e) {
    fail(ErrorCode::ParseError, std::string("v.params: ") + e.what());
  }
  fail(ErrorCode::ParseError, "unknown canonical function kind '" + kind + "'");
}

inline json v_to_json(const CanonicalFunction& v) {
  json out;
  out["kind"] = to_string(v.kind);
  json params = json::object();
  switch (v.kind) {
    case VKind::QuadraticDiag:
      params["beta"] = vec_to_json(v.beta);
      break;
    case VKind::Exponential:
      break;
    case VKind::ExpPlusQuad:
      params["p"] = v.p;
      params["beta"] = vec_to_json(v.beta);
      break;
    case VKind::LogSumExpPlusQuad:
      params["p"] = v.p;
      params["beta_scale"] = v.beta_scale;
      params["beta"] = vec_to_json(v.beta);
      break;
    case VKind::IndicatorCone:
      params["J"] = v.cone_J;
      break;
  }
  out["params"] = params;
  return out;
}

}  // namespace io_detail

inline ProblemDocument parse_problem(const json& j) {
  try {
    require(j.is_object(), ErrorCode::ParseError, "problem document must be a JSON object");
    ProblemDocument doc;
    doc.schema_version = j.value("schema_version", "1");
    require(j.contains("n") && j.contains("m") && j.contains("quadratics") && j.contains("v"),
            ErrorCode::ParseError, "problem document needs n, m, quadratics, v");
    const int n = j["n"].get<int>();
    const int m = j["m"].get<int>();
    require(n > 0 && m > 0, ErrorCode::ParseError, "n and m must be positive");
    const json& jq = j["quadratics"];
    require(jq.is_array() && static_cast<int>(jq.size()) == m + 1, ErrorCode::ParseError,
            "quadratics: expected m + 1 entries (index 0 = objective part)");
    std::vector<QuadraticForm> qs;
    for (const auto& e : jq) {
      QuadraticForm q;
      q.A = io_detail::mat_from_json(e.at("A"), n, "quadratics[].A");
      q.b = io_detail::vec_from_json(e.at("b"), n, "quadratics[].b");
      q.c = e.at("c").get<double>();
      qs.push_back(std::move(q));
    }
    doc.instance = make_problem(n, m, std::move(qs), io_detail::v_from_json(j["v"], m));
    if (j.contains("seeds")) {
      require(j["seeds"].is_array(), ErrorCode::ParseError, "seeds must be an array");
      for (const auto& s : j["seeds"])
        doc.seeds.push_back(io_detail::vec_from_json(s, m, "seeds[]"));
    }
    return doc;
  } catch (const json::exception& e) {
    fail(ErrorCode::ParseError, e.what());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ParseError) throw;
    fail(ErrorCode::ParseError, e.what());
  }
}

inline ProblemDocument load_problem_file(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), ErrorCode::ParseError, "cannot open '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    fail(ErrorCode::ParseError, e.what());
  }
  return parse_problem(j);
}

inline json to_json(const ProblemDocument& doc) {
  json out;
  out["schema_version"] = doc.schema_version;
  out["n"] = doc.instance.n;
  out["m"] = doc.instance.m;
  json qs = json::array();
  for (const auto& q : doc.instance.quadratics) {
    json e;
    e["A"] = io_detail::mat_to_json(q.A);
    e["b"] = io_detail::vec_to_json(q.b);
    e["c"] = q.c;
    qs.push_back(std::move(e));
  }
  out["quadratics"] = qs;
  out["v"] = io_detail::v_to_json(doc.instance.v);
  if (!doc.seeds.empty()) {
    json seeds = json::array();
    for (const auto& s : doc.seeds) seeds.push_back(io_detail::vec_to_json(s));
    out["seeds"] = seeds;
  }
  return out;
}

// NaN/inf are not representable in JSON; extended-real slots become null.
inline json finite_or_null(double x) {
  return std::isfinite(x) ? json(x) : json(nullptr);
}

inline json region_to_json(const RegionLabel& r) {
  json out;
  out["in_dom_Vstar"] = r.in_dom_vstar;
  out["in_Y0"] = r.in_Y0;
  out["in_Yplus"] = r.in_Yplus;
  out["in_Yminus"] = r.in_Yminus;
  out["in_Ycol"] = r.in_Ycol;
  out["in_Ycol_plus"] = r.in_Ycol_plus;
  out["in_Ycol_minus"] = r.in_Ycol_minus;
  out["definiteness_boundary"] = r.definiteness_boundary;
  out["lambda_min"] = finite_or_null(r.lambda_min);
  out["lambda_max"] = finite_or_null(r.lambda_max);
  return out;
}

inline json spectral_to_json(const SpectralSummary& s) {
  json out;
  out["alpha"] = s.alpha;
  out["beta"] = s.beta;
  out["gamma"] = s.gamma ? json(*s.gamma) : json(nullptr);
  out["delta"] = s.delta ? json(*s.delta) : json(nullptr);
  out["rank"] = s.rank;
  out["ker_Q_dim"] = s.ker_Q_dim;
  out["ker_R_dim"] = s.ker_R_dim;
  return out;
}

inline json certificate_to_json(const Certificate& c) {
  json out;
  out["type"] = c.type == Certificate::Type::GlobalMin ? "GlobalMin" : "GlobalMax";
  out["unique"] = c.unique;
  out["chain"] = {{"q0_xbar", finite_or_null(c.chain.q0_x)},
                  {"L", finite_or_null(c.chain.L)},
                  {"D_L", finite_or_null(c.chain.D_L)}};
  out["lambda_min"] = finite_or_null(c.lambda_min);
  out["lambda_max"] = finite_or_null(c.lambda_max);
  return out;
}

inline json report_to_json(const TrialityReport& r) {
  json out;
  out["x"] = io_detail::vec_to_json(r.x);
  out["sigma"] = io_detail::vec_to_json(r.sigma);
  out["region"] = region_to_json(r.region);
  out["branch"] = to_string(r.branch);
  out["x_verdict"] = to_string(r.x_verdict);
  out["sigma_verdict"] = to_string(r.sigma_verdict);
  out["justification"] = r.justification;
  out["nonsingular_f_hess"] = r.nonsingular_f_hess;
  out["f_x"] = finite_or_null(r.f_at_x);
  out["xi"] = finite_or_null(r.xi_at_pair);
  out["D_sigma"] = finite_or_null(r.d_at_sigma);
  if (r.factorization) out["spectral"] = spectral_to_json(r.factorization->spectra);
  if (r.cone_certificate) out["certificate"] = certificate_to_json(*r.cone_certificate);
  return out;
}

}  // namespace cdt
