#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "mls/errors.hpp"
#include "mls/io.hpp"

using namespace mls;

namespace {

PointSet parse(const std::string& text, bool require_values = false)
{
    std::istringstream in(text);
    return read_points_csv(in, require_values);
}

} // namespace

TEST(Csv, Reads)
{
    const PointSet p = parse("x1,f\n0,1.5\n1,2.5\n2.25,-3e-2\n");
    EXPECT_EQ(p.dim(), 1);
    EXPECT_EQ(p.size(), 3);
    EXPECT_DOUBLE_EQ(p.values()(2), -0.03);

    const PointSet q = parse("x1,x2\n0,0\n1,0.5\n");
    EXPECT_EQ(q.dim(), 2);
    EXPECT_FALSE(q.has_values());
}

TEST(Csv, Rejects)
{
    EXPECT_THROW(parse("x1\n0\n1\n", true), InputError);
    EXPECT_THROW(parse(""), InputError);
    EXPECT_THROW(parse("x1,f\n"), InputError);
    EXPECT_THROW(parse("x1,f\n0,1\n1\n"), InputError);
    EXPECT_THROW(parse("x1,f\n0,abc\n"), InputError);
    EXPECT_THROW(parse("x1,f\n0,1,5\n"), InputError);
    EXPECT_THROW(parse("y,f\n0,1\n"), InputError);
    EXPECT_THROW(parse("x1,f\n1,1\n1,2\n"), InputError);
}

TEST(Config, Parse)
{
    const ModelConfig c = parse_model_config(
        Json::parse(R"({"weight": {"family": "mclain", "alpha": 0.5}, "basis": {"kind": "monomial", "l": 3}})"));
    EXPECT_EQ(c.weight.family, WeightFamily::McLain);
    EXPECT_DOUBLE_EQ(c.weight.alpha, 0.5);
    EXPECT_EQ(c.l, 3);

    EXPECT_THROW(parse_model_config(Json::parse(R"({"weight": {"family": "exp", "alpha": -1}})")), ConfigError);
    EXPECT_THROW(parse_model_config(Json::parse(R"({"weight": {"family": "box"}})")), ConfigError);
    EXPECT_THROW(parse_model_config(Json::parse(R"({"basis": {"kind": "custom", "l": 2}})")), ConfigError);
}

TEST(Format, RoundTrip)
{
    for (double v : {0.1, 1.0 / 3.0, 1e-300, -2.5e17, 0.21194155761708547})
        EXPECT_EQ(std::stod(format_double(v)), v);
    EXPECT_EQ(format_double(2.0), "2");
}

TEST(Json, SpectralReportShape)
{
    const auto sys = MlsSystem::build(PointSet::line({0, 1, 2, 3}), BasisSpec::monomial(1, 2), WeightSpec::exp(0.5), 1.7);
    const Json j = to_json(diagnose(sys));
    for (const char* key : {"symmetry", "eigen", "psd", "norms", "pass", "tolerances"})
        EXPECT_TRUE(j.contains(key)) << key;
    EXPECT_TRUE(j["pass"].get<bool>());
    // flags are recomputable from the stored numbers
    for (const auto& c : j["norms"]["standard"]) {
        const double lhs = c["lhs"], rhs = c["rhs"], tol = c["tolerance"];
        EXPECT_EQ(c["pass"].get<bool>(), lhs <= rhs + tol);
    }
}

TEST(Json, CertificateK0IsOneBased)
{
    const BoundCertificate c = certify_bound(PointSet::line({0, 1, 2}), BasisSpec::monomial(1, 2), WeightSpec::exp(1.0),
                                             {0.0, 0.5, 0.9, 2.0});
    const Json j = to_json(c);
    EXPECT_EQ(j["points"][0][3].get<int>(), 1);
    EXPECT_EQ(j["points"][1][3].get<int>(), 1);
    EXPECT_EQ(j["points"][2][3].get<int>(), 2);
    EXPECT_EQ(j["points"][3][3].get<int>(), 3);
    const std::string csv = bound_csv(c);
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "x,lhs,rhs,slack");
}

TEST(Dump, Deterministic)
{
    const Json a = Json::parse(R"({"b": 1, "a": [0.1, 2]})");
    EXPECT_EQ(dump(a), dump(Json::parse(dump(a))));
    EXPECT_LT(dump(a).find("\"a\""), dump(a).find("\"b\""));
}

TEST(WriteAtomic, Replaces)
{
    const auto path = std::filesystem::temp_directory_path() / "mls_io_test.json";
    write_atomic(path, "first\n");
    write_atomic(path, "second\n");
    std::ifstream in(path);
    std::string s((std::istreambuf_iterator<char>(in)), {});
    EXPECT_EQ(s, "second\n");
    std::filesystem::remove(path);
}
