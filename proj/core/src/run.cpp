#include "badcantor/run.hpp"

#include <fstream>
#include <random>

#include "badcantor/cantor.hpp"
#include "badcantor/certificate.hpp"
#include "badcantor/constants.hpp"
#include "badcantor/lattice.hpp"
#include "badcantor/oracle.hpp"

namespace badcantor {

ExitStatus exit_status_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::Undecidable:
    case ErrorCode::PrecisionExhausted:
      return kExitUndecidable;
    case ErrorCode::Extinct:
    case ErrorCode::CertificateBroken:
    case ErrorCode::NoPrimalSolution:
    case ErrorCode::SearchExhausted:
      return kExitFail;
    default:
      return kExitConfig;
  }
}

namespace {

void emit(const RunConfig& cfg, const std::string& body, std::ostream& out) {
  if (!cfg.has("output")) {
    out << body;
    return;
  }
  std::ofstream f(cfg.text("output"), std::ios::binary);
  if (!f) throw Error(ErrorCode::ConfigError, "cannot write " + cfg.text("output"));
  f << body;
}

ShiftField shift_for(const Certificate& cert) {
  return build_shift(cert.shift, cert.sheet.I0.dilate(Rational(pow3(cert.curve.size() + 1))));
}

int construct(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  Problem p = build_problem(cfg);
  const long q_max = cfg.integer("q_max");
  if (q_max < 1) throw Error(ErrorCode::ConfigError, "field 'q_max': must be at least 1");
  ConstantInputs in;
  in.curve = &p.curve;
  in.shift = &p.shift;
  in.weights = p.weights;
  in.R = ScaleBase::integer(p.R);
  in.I0 = p.I0;
  in.measure = p.measure;
  in.xi_depth = cfg.has("xi_depth") ? cfg.integer("xi_depth") : q_max;
  in.xi_samples = static_cast<int>(cfg.integer("xi_samples"));
  in.precision = static_cast<mpfr_prec_t>(cfg.integer("precision"));
  ConstantSheet sheet = derive_constants(in);
  CantorState st = make_state(p.curve, p.shift, sheet, p.measure, engine_options(cfg));
  run_to(st, q_max);
  Certificate cert = emit_certificate(st, sheet, p.curve, p.shift);
  cert.config_hash = config_hash(cfg);
  emit(cfg, serialize_certificate(cert), out);
  std::ostream& log = cfg.has("output") ? out : err;
  std::string t_last = !cert.t.empty() && cert.t.back() ? to_string(*cert.t.back()) : "n/a";
  log << "alive=" << st.alive.size() << ", t'_q=" << t_last << ", q=" << st.q << ", M_max=" << cert.M_max
      << ", backtracks=" << st.backtracks << ", status=" << cert.status << "\n";
  for (const auto& f : st.expectation_failures) log << "expectation failure: " << f << "\n";
  return kExitPass;
}

QualityReport check(const Certificate& cert) {
  CurveModel curve = build_curve(cert.curve, cert.domain);
  return verify_certificate(cert, curve, shift_for(cert));
}

void print_failures(const QualityReport& rep, std::ostream& err) {
  auto failing = rep.failing_m();
  err << "verify: fail";
  for (const auto& d : rep.defects) err << "; " << d;
  for (long m : failing) {
    for (const auto& row : rep.rows) {
      if (row.m != m) continue;
      err << "; m=" << m << " i=" << row.worst_i + 1 << " p=";
      for (std::size_t k = 0; k < row.p.size(); ++k) err << (k ? " " : "") << to_string(row.p[k]);
    }
  }
  err << "\n";
}

int verify(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  Certificate cert = load_certificate(cfg.text("certificate"));
  QualityReport rep = check(cert);
  cert.report = render_report(rep);
  if (cfg.has("output")) {
    save_certificate(cert, cfg.text("output"));
  } else {
    out << "[report]\n" << *cert.report;
  }
  if (!rep.pass) {
    print_failures(rep, err);
    return kExitFail;
  }
  err << "verify: pass (" << rep.rows.size() << " banded m, worst m=" << rep.worst_m << ")\n";
  return kExitPass;
}

int oracle(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  if (!cfg.has("oracle_x")) {
    QualityReport rep = check(load_certificate(cfg.text("certificate")));
    emit(cfg, render_report(rep), out);
    if (!rep.pass) print_failures(rep, err);
    return rep.pass ? kExitPass : kExitFail;
  }
  const Rational x = cfg.rational("oracle_x");
  RationalInterval domain = cfg.has("domain") ? [&] {
    auto v = cfg.rationals("domain");
    if (v.size() != 2) throw Error(ErrorCode::ConfigError, "field 'domain': expected 'left right'");
    return RationalInterval(v[0], v[1]);
  }() : RationalInterval(x - 1, x + 1);
  CurveModel curve = build_curve(cfg.polynomials("curve"), domain);
  ShiftField shift = build_shift(cfg.polynomials("shift"), domain);
  Weight w = validate_weights(cfg.rationals("weights"));
  if (w.dim() != curve.dim() || shift.dim() != curve.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "curve, shift and weights dimensions differ");
  }
  const long Q = cfg.integer("oracle_Q"), M0 = cfg.integer("oracle_M0");
  Estimate e = bad_constant_estimate(curve, shift, w, x, Q, M0);
  std::string body = "x = " + to_string(x) + "\nrange = (" + std::to_string(M0) + ", " + std::to_string(Q) +
                     "]\nestimate = " + e.value.decimal(40) + "\nestimate.factor = " + to_string(e.value.factor) +
                     "\nestimate.base = " + to_string(e.value.base) + "\nestimate.exponent = " +
                     to_string(e.value.exponent) + "\nargmin_m = " + to_string(e.argmin) + "\n";
  emit(cfg, body, out);
  return kExitPass;
}

int transfer_test(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  const long count = cfg.integer("transfer_count");
  const long B = cfg.integer("transfer_B");
  std::mt19937_64 rng(static_cast<std::uint64_t>(cfg.integer("transfer_seed")));
  long found = 0, vacuous = 0, exhausted = 0, identity_failures = 0;
  for (long k = 0; k < count; ++k) {
    TransferInstance inst = planted_transfer_instance(rng, 1 + static_cast<std::size_t>(k % 2));
    try {
      TransferReport rep = transference_check(inst, B);
      ++found;
      if (!rep.identity_holds) ++identity_failures;
    } catch (const Error& e) {
      if (e.code() == ErrorCode::NoPrimalSolution) {
        ++vacuous;
      } else if (e.code() == ErrorCode::SearchExhausted) {
        ++exhausted;
      } else {
        throw;
      }
    }
  }
  std::string body = "systems = " + std::to_string(count) + "\ndual_found = " + std::to_string(found) +
                     "\nvacuous = " + std::to_string(vacuous) + "\nsearch_exhausted = " + std::to_string(exhausted) +
                     "\nidentity_failures = " + std::to_string(identity_failures) + "\n";
  emit(cfg, body, out);
  return exhausted == 0 && identity_failures == 0 ? kExitPass : kExitFail;
}

int lattice_probe(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  Problem p = build_problem(cfg);
  const Rational step = cfg.rational("probe_t_step");
  const Rational t_max = cfg.has("probe_t_max") ? cfg.rational("probe_t_max") : Rational(cfg.integer("q_max"));
  if (step <= 0 || t_max <= 0) throw Error(ErrorCode::ConfigError, "probe t step and range must be positive");
  const auto prec = static_cast<mpfr_prec_t>(cfg.integer("precision"));
  ScaleBase base = ScaleBase::integer(p.R);
  std::string body;
  for (const auto& x : xi_sample_points(p.I0, static_cast<int>(cfg.integer("probe_samples")))) {
    for (Rational t = step; t <= t_max; t += step) {
      ShortestVector sv = shortest_nonzero(orbit_lattice(p.curve, p.weights, base, x, t), prec);
      body += to_string(x) + "\t" + to_string(t) + "\t" + sv.norm.decimal(40) + "\t";
      for (std::size_t k = 0; k < sv.coeffs.size(); ++k) body += (k ? " " : "") + to_string(sv.coeffs[k]);
      body += "\n";
    }
  }
  emit(cfg, body, out);
  return kExitPass;
}

}  // namespace

int run(std::string_view subcommand, const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  for (const auto& w : cfg.warnings) err << "warning: " << w << "\n";
  try {
    if (subcommand == "construct") return construct(cfg, out, err);
    if (subcommand == "verify") return verify(cfg, out, err);
    if (subcommand == "oracle") return oracle(cfg, out, err);
    if (subcommand == "transfer-test") return transfer_test(cfg, out, err);
    if (subcommand == "lattice-probe") return lattice_probe(cfg, out, err);
    err << "unknown subcommand '" << subcommand << "'\n";
    return kExitConfig;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_status_for(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  }
}

}  // namespace badcantor
