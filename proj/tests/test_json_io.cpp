#include <gtest/gtest.h>

#include "oracles.hpp"

using namespace acf;

namespace {

Json term(Exponent e, const char* num, const char* den) { return {{"exp", e}, {"num", num}, {"den", den}}; }

Json series_doc(unsigned order, Json terms) {
  return {{"variables", {"x", "y"}}, {"truncation_order", order}, {"terms", std::move(terms)}};
}

}  // namespace

TEST(SeriesJson, RoundTripAndOrdering) {
  SeededStream st(1);
  for (int i = 0; i < 10; ++i) {
    const unsigned n = i % 2 ? 3 : 2;
    TruncSeries s(n, 7);
    for (unsigned k = 0; k < 7; ++k) {
      HomogPoly p = oracle::random_poly(st, n, k);
      p *= Rational(1, 1 + i);
      s.add_component(p);
    }
    const Json j = series_to_json(s);
    EXPECT_EQ(series_from_json(j), s);
    EXPECT_EQ(series_from_json(Json::parse(j.dump())), s);
    // ascending degree, descending lex inside a degree
    const auto& terms = j["terms"];
    for (std::size_t t = 1; t < terms.size(); ++t) {
      const Exponent a = terms[t - 1]["exp"], b = terms[t]["exp"];
      EXPECT_TRUE(total_degree(a) < total_degree(b) || (total_degree(a) == total_degree(b) && a > b));
    }
  }
}

TEST(SeriesJson, CanonicalizesAndRejects) {
  const auto s = series_from_json(series_doc(3, {term({1, 0}, "6", "4"), term({0, 1}, "0", "5")}));
  EXPECT_EQ(s.component(1).coeff({1, 0}), Rational(3, 2));
  EXPECT_EQ(s.component(1).size(), 1u);
  EXPECT_THROW(series_from_json(series_doc(3, {term({1, 0}, "1", "0")})), InputError);
  EXPECT_THROW(series_from_json(series_doc(3, {term({1, 0}, "1", "-2")})), InputError);
  EXPECT_THROW(series_from_json(series_doc(3, {term({1, 0}, "1", "1"), term({1, 0}, "2", "1")})), InputError);
  EXPECT_THROW(series_from_json(series_doc(3, {term({3, 0}, "1", "1")})), InputError);
  EXPECT_THROW(series_from_json(series_doc(3, {term({1, 0, 0}, "1", "1")})), InputError);
  EXPECT_THROW(series_from_json(series_doc(3, {term({1, 0}, "1.5", "1")})), InputError);
  EXPECT_THROW(series_from_json(series_doc(0, Json::array())), InputError);
  EXPECT_THROW(series_from_json(Json::object()), InputError);
}

TEST(OneFormJson, RoundTrip) {
  const OneForm f = one_form_from_json(read_json_file(ACF_INSTANCE_DIR "/dx7y7.json"));
  EXPECT_EQ(f.trunc_order(), 12u);
  EXPECT_EQ(f[0].component(6).coeff({6, 0}), 7);
  EXPECT_EQ(one_form_from_json(one_form_to_json(f)), f);
  Json bad = one_form_to_json(f);
  bad["components"].erase(1);
  EXPECT_THROW(one_form_from_json(bad), InputError);
}

TEST(InstanceJson, LoadsSamples) {
  const Instance inst = instance_from_json(read_json_file(ACF_INSTANCE_DIR "/d18_cx.json"));
  EXPECT_EQ(inst.d, 18u);
  EXPECT_EQ(inst.N, 22u);
  EXPECT_EQ(obstruction(inst.C, inst.D), 1);
  EXPECT_NO_THROW(inst.validate());
  const Instance again = instance_from_json(instance_to_json(inst));
  EXPECT_EQ(again.C, inst.C);
  EXPECT_EQ(again.seed, inst.seed);
  const Instance b = instance_from_json(read_json_file(ACF_INSTANCE_DIR "/d18_bounded.json"));
  EXPECT_EQ(b.mode, BuildMode::lemma1_bounded);
  Json j = instance_to_json(inst);
  j["mode"] = "fast";
  EXPECT_THROW(instance_from_json(j), InputError);
  j.erase("mode");
  j["d"] = -3;
  EXPECT_THROW(instance_from_json(j), InputError);
}

TEST(CertificateJson, RoundTrip) {
  ChartCertificate cc{Chart::w0, 20, {{Rational(1, 3), Rational(-2), Rational(0)}}, "abc"};
  const auto doc = certificate_from_json(certificate_to_json(cc, 21));
  EXPECT_EQ(doc.order, 21u);
  EXPECT_EQ(doc.certificate.chart, Chart::w0);
  EXPECT_EQ(doc.certificate.through_degree, 20u);
  EXPECT_EQ(doc.certificate.system_hash, "abc");
  EXPECT_EQ(doc.certificate.certificate.row_combination, cc.certificate.row_combination);
  Json j = certificate_to_json(cc, 21);
  j["chart"] = "Q0";
  EXPECT_THROW(certificate_from_json(j), InputError);
}

TEST(ReadJsonFile, MalformedAndMissing) {
  const std::string path = ::testing::TempDir() + "/malformed.json";
  {
    std::ofstream f(path);
    f << "{ not json";
  }
  EXPECT_THROW(read_json_file(path), InputError);
  EXPECT_THROW(read_json_file(path + ".missing"), InputError);
}

TEST(SystemDigest, StableAndSensitive) {
  AffineSystem s;
  s.matrix = Matrix(0, 2);
  s.column_labels = {"a", "b"};
  s.append_equation({1, Rational(1, 2)}, 3);
  const auto h = system_digest(s);
  EXPECT_EQ(h, system_digest(s));
  EXPECT_EQ(h.size(), 64u);
  s.rhs[0] = 4;
  EXPECT_NE(h, system_digest(s));
}
