#include <gtest/gtest.h>

#include <fstream>

#include "badcantor/cantor.hpp"
#include "badcantor/certificate.hpp"
#include "badcantor/config.hpp"
#include "badcantor/errors.hpp"
#include "badcantor/oracle.hpp"
#include "support.hpp"

namespace badcantor {
namespace {

using testing::Q;

std::string error_text(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    EXPECT_TRUE(e.code() == ErrorCode::ConfigError || e.code() == ErrorCode::ParseError) << e.what();
    return e.what();
  }
  ADD_FAILURE() << "no error thrown";
  return {};
}

TEST(Config, ParsesKeysCommentsAndDefaults) {
  RunConfig cfg = parse_config("# parabola\ncurve = 0/1 1/1 ; 0/1 0/1 1/1\n\nR = 64  # arity\nbeam=8\n");
  EXPECT_EQ(cfg.integer("R"), 64);
  EXPECT_EQ(cfg.integer("beam"), 8);
  EXPECT_EQ(cfg.integer("q_max"), 8);
  EXPECT_TRUE(cfg.flag("escape_removal"));
  auto polys = cfg.polynomials("curve");
  ASSERT_EQ(polys.size(), 2u);
  EXPECT_EQ(polys[1], Polynomial::monomial(2));
  EXPECT_EQ(cfg.lines.at("R"), 4);
}

TEST(Config, ReportsLineNumbers) {
  EXPECT_NE(error_text([] { parse_config("R = 32\nbogus = 1\n"); }).find("line 2"), std::string::npos);
  EXPECT_NE(error_text([] { parse_config("R = 32\n\nR = 64\n"); }).find("line 3: duplicate key 'R'"),
            std::string::npos);
  EXPECT_NE(error_text([] { parse_config("just text\n"); }).find("line 1"), std::string::npos);
  RunConfig bad = parse_config("q_max = 4\nR = 3/2\n");
  EXPECT_NE(error_text([&] { bad.integer("R"); }).find("line 2, field 'R'"), std::string::npos);
  RunConfig flag = parse_config("escape_removal = maybe\n");
  EXPECT_NE(error_text([&] { flag.flag("escape_removal"); }).find("field 'escape_removal'"), std::string::npos);
  RunConfig missing = parse_config("R = 32\n");
  EXPECT_NE(error_text([&] { missing.text("curve"); }).find("missing required field 'curve'"), std::string::npos);
}

TEST(Config, FileWinsOverFlags) {
  RunConfig cfg = parse_config("R = 32\n");
  merge_flags(cfg, {{"R", "64"}, {"beam", "4"}});
  EXPECT_EQ(cfg.integer("R"), 32);
  EXPECT_EQ(cfg.integer("beam"), 4);
  ASSERT_EQ(cfg.warnings.size(), 1u);
  EXPECT_NE(cfg.warnings[0].find("--R ignored"), std::string::npos);
  EXPECT_THROW(merge_flags(cfg, {{"nope", "1"}}), Error);
}

TEST(Config, HashIgnoresLayout) {
  RunConfig a = parse_config("R = 32\nbeam = 4\n");
  RunConfig b = parse_config("# comment\nbeam=4\n\n   R   =   32\n");
  RunConfig c = parse_config("R = 33\nbeam = 4\n");
  EXPECT_EQ(config_hash(a), config_hash(b));
  EXPECT_NE(config_hash(a), config_hash(c));
  EXPECT_EQ(config_hash(a).size(), 16u);
}

TEST(Config, ProblemChecks) {
  RunConfig asc = parse_config(
      "curve = 0/1 1/1 ; 0/1 0/1 1/1\nshift = 1/7 ; 1/3 1/11\nweights = 1/3 2/3\ndomain = -1 1\n");
  EXPECT_NE(error_text([&] { build_problem(asc); }).find("weights"), std::string::npos);
  RunConfig dims = parse_config("curve = 0/1 1/1 ; 0/1 0/1 1/1\nshift = 1/7\nweights = 1/2 1/2\ndomain = -1 1\n");
  EXPECT_THROW(build_problem(dims), Error);
  RunConfig ok = parse_config(
      "curve = 0/1 1/1 ; 0/1 0/1 1/1\nshift = 1/7 ; 1/3 1/11\nweights = 1/2 1/2\ndomain = -1 1\n");
  Problem p = build_problem(ok);
  EXPECT_EQ(p.I0, RationalInterval(Q(-1, 54), Q(1, 54)));
  EXPECT_EQ(p.shift.lipschitz[1], Q(1, 11));
}

Certificate small_certificate() {
  static const CurveModel curve = testing::line();
  static const RationalInterval I0 = select_base_interval(curve, Integer(32), MeasureOracle::lebesgue(), Q(0));
  static const ShiftField shift = build_shift({Polynomial::constant(Q(1, 7))}, I0.dilate(Q(9)));
  static const ConstantSheet sheet = [] {
    ConstantInputs in;
    in.curve = &curve;
    in.shift = &shift;
    in.weights = testing::weights({Q(1)});
    in.R = ScaleBase::integer(32);
    in.I0 = I0;
    in.xi_depth = 13;
    return derive_constants(in);
  }();
  EngineOptions opt;
  opt.escape_tests = false;
  CantorState st = make_state(curve, shift, sheet, MeasureOracle::lebesgue(), opt);
  run_to(st, 13);
  Certificate cert = emit_certificate(st, sheet, curve, shift);
  cert.config_hash = "0123456789abcdef";
  return cert;
}

TEST(Certificate, RoundTripIsByteIdentical) {
  Certificate cert = small_certificate();
  std::string text = serialize_certificate(cert);
  Certificate back = parse_certificate(text);
  EXPECT_EQ(serialize_certificate(back), text);
  EXPECT_EQ(back.x_star, cert.x_star);
  EXPECT_EQ(back.chain, cert.chain);
  EXPECT_EQ(back.sheet.c, cert.sheet.c);
  EXPECT_EQ(back.M_max, cert.M_max);
  EXPECT_EQ(back.ledger.size(), cert.ledger.size());
  EXPECT_EQ(back.ledger.back().h_prime, cert.ledger.back().h_prime);
  EXPECT_EQ(back.ledger.back().f, cert.ledger.back().f);

  cert.report = "verdict = pass\n";
  Certificate with_report = parse_certificate(serialize_certificate(cert));
  ASSERT_TRUE(with_report.report.has_value());
  EXPECT_EQ(*with_report.report, "verdict = pass\n");
}

TEST(Certificate, FloorFields) {
  Certificate cert = small_certificate();
  EXPECT_EQ(cert.floor_base, cert.sheet.c / 4);
  EXPECT_EQ(cert.floor_exp, Q(1));
  EXPECT_NEAR(std::stod(cert.floor_decimal), Rational(cert.sheet.c / 4).get_d(), 1e-12 * Rational(cert.sheet.c / 4).get_d());
  EXPECT_EQ(cert.ledger.size(), static_cast<std::size_t>(cert.q_max));
  EXPECT_EQ(cert.chain.size(), static_cast<std::size_t>(cert.q_max) + 1);
}

TEST(Certificate, RejectsMalformedText) {
  std::string text = serialize_certificate(small_certificate());
  EXPECT_THROW(parse_certificate(text.substr(0, text.find("[chain]"))), Error);
  std::string bad = text;
  bad.replace(bad.find("q_max = "), 9, "q_max = x");
  EXPECT_THROW(parse_certificate(bad), Error);
}

TEST(Certificate, StructuralTamperingIsBroken) {
  Certificate cert = small_certificate();
  const CurveModel curve = build_curve(cert.curve, cert.domain);
  const ShiftField shift = build_shift(cert.shift, cert.sheet.I0.dilate(Q(9)));
  EXPECT_TRUE(verify_certificate(cert, curve, shift).pass);

  auto broken = [&](Certificate c) {
    try {
      verify_certificate(c, curve, shift);
    } catch (const Error& e) {
      return e.code() == ErrorCode::CertificateBroken;
    }
    return false;
  };
  Certificate a = cert;
  a.chain[3].left += a.chain[3].length() / 2;
  EXPECT_TRUE(broken(a));
  Certificate b = cert;
  b.M_max += 1;
  EXPECT_TRUE(broken(b));
  Certificate c = cert;
  c.floor_base *= 2;
  EXPECT_TRUE(broken(c));
  Certificate d = cert;
  d.sheet.c *= 2;
  EXPECT_TRUE(broken(d));
}

TEST(Certificate, PointInsideAWindowFails) {
  Certificate cert = small_certificate();
  const CurveModel curve = build_curve(cert.curve, cert.domain);
  const ShiftField shift = build_shift(cert.shift, cert.sheet.I0.dilate(Q(9)));
  // m x - 1/7 = 0 at x = 1/(7m).
  long m = std::max(1L, to_long_checked(floor(cert.m_floor)) + 1);
  while (m < cert.M_max && !cert.sheet.I0.contains(Q(1, 7) / Q(m))) ++m;
  Rational center = Q(1, 7) / Q(m);
  ASSERT_TRUE(cert.sheet.I0.contains(center));
  cert.x_star = center;
  QualityReport rep = verify_certificate(cert, curve, shift);
  EXPECT_FALSE(rep.pass);
  auto failing = rep.failing_m();
  EXPECT_NE(std::find(failing.begin(), failing.end(), m), failing.end());
  EXPECT_FALSE(rep.defects.empty());
  std::string text = render_report(rep);
  EXPECT_NE(text.find("verdict = fail"), std::string::npos);
  EXPECT_NE(text.find("defect = x* outside the final interval"), std::string::npos);
}

}  // namespace
}  // namespace badcantor
