#include "bispec/bispec.h"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

namespace {

// owns a library-allocated string
std::string take(char* s)
{
    std::string out = s ? s : "";
    bispec_string_free(s);
    return out;
}

} // namespace

TEST(CApi, VersionAndDefaults)
{
    EXPECT_STREQ(bispec_version(), "0.1.0");
    bispec_solver_options o;
    bispec_solver_options_default(&o);
    EXPECT_EQ(o.mode, BISPEC_SOLVER_AUTO);
    EXPECT_GT(o.tol, 0.0);
    bispec_numeric_options n;
    bispec_numeric_options_default(&n);
    EXPECT_EQ(n.grid, 64);
    bispec_study_options s;
    bispec_study_options_default(&s);
    EXPECT_EQ(s.levels, 3);
}

TEST(CApi, AnalyticSpectrum)
{
    bispec_surface* s = nullptr;
    ASSERT_EQ(bispec_surface_clifford(1, 1, &s), BISPEC_OK);
    EXPECT_EQ(bispec_surface_dimension(s), 2);
    EXPECT_EQ(bispec_surface_is_minimal(s), 1);
    bispec_spectrum* sp = nullptr;
    ASSERT_EQ(bispec_spectrum_analytic(s, BISPEC_LAPLACE, 10.0, &sp), BISPEC_OK);
    ASSERT_EQ(bispec_spectrum_size(sp), 5u);
    int64_t num = 0, den = 0, mult = 0;
    ASSERT_EQ(bispec_spectrum_entry(sp, 4, &num, &den, &mult), BISPEC_OK);
    EXPECT_EQ(num, 10);
    EXPECT_EQ(den, 1);
    EXPECT_EQ(mult, 8);
    EXPECT_EQ(bispec_spectrum_entry(sp, 5, &num, &den, &mult), BISPEC_ERR_INVALID_ARGUMENT);
    char* csv = nullptr;
    ASSERT_EQ(bispec_spectrum_to_csv(sp, &csv), BISPEC_OK);
    EXPECT_EQ(take(csv).rfind("value,multiplicity\n0,1\n2,4\n", 0), 0u);
    bispec_spectrum_free(sp);
    bispec_surface_free(s);
}

TEST(CApi, ErrorsAreReportedNotThrown)
{
    bispec_surface* s = nullptr;
    EXPECT_EQ(bispec_surface_great_sphere(0, &s), BISPEC_ERR_INVALID_ARGUMENT);
    EXPECT_EQ(s, nullptr);
    EXPECT_NE(std::string(bispec_last_error()), "");
    EXPECT_EQ(bispec_surface_product(1, 1, 1.2, &s), BISPEC_ERR_INVALID_ARGUMENT);
    EXPECT_EQ(bispec_surface_from_json("{not json", &s), BISPEC_ERR_INVALID_ARGUMENT);
    bispec_mesh* m = nullptr;
    EXPECT_EQ(bispec_mesh_icosphere(8, &m), BISPEC_ERR_RESOURCE_LIMIT);
    EXPECT_EQ(bispec_mesh_circle(2, &m), BISPEC_ERR_INVALID_ARGUMENT);
    EXPECT_EQ(bispec_surface_clifford(1, 1, nullptr), BISPEC_ERR_INVALID_ARGUMENT);
    bispec_problem p;
    EXPECT_EQ(bispec_problem_from_string("heat", &p), BISPEC_ERR_INVALID_ARGUMENT);
    EXPECT_EQ(bispec_problem_from_string("buckling", &p), BISPEC_OK);
    EXPECT_EQ(p, BISPEC_BUCKLING);
}

TEST(CApi, SurfaceJsonRoundTrip)
{
    bispec_surface* s = nullptr;
    ASSERT_EQ(bispec_surface_product(1, 1, 0.3, &s), BISPEC_OK);
    EXPECT_EQ(bispec_surface_is_minimal(s), 0);
    char* text = nullptr;
    ASSERT_EQ(bispec_surface_to_json(s, &text), BISPEC_OK);
    const std::string j = take(text);
    bispec_surface* back = nullptr;
    ASSERT_EQ(bispec_surface_from_json(j.c_str(), &back), BISPEC_OK);
    char* l1 = nullptr;
    char* l2 = nullptr;
    bispec_surface_label(s, &l1);
    bispec_surface_label(back, &l2);
    EXPECT_EQ(take(l1), take(l2));
    bispec_surface_free(back);
    bispec_surface_free(s);
}

TEST(CApi, MeshOperatorsAndEigenpairs)
{
    bispec_surface* s = nullptr;
    ASSERT_EQ(bispec_surface_clifford(1, 1, &s), BISPEC_OK);
    bispec_mesh* m = nullptr;
    ASSERT_EQ(bispec_mesh_for(s, 16, &m), BISPEC_OK);
    bispec_mesh* fine = nullptr;
    ASSERT_EQ(bispec_mesh_refine(m, &fine), BISPEC_OK);
    bispec_mesh_info info;
    ASSERT_EQ(bispec_mesh_info_get(fine, &info), BISPEC_OK);
    EXPECT_EQ(info.vertices, 32 * 32);
    EXPECT_EQ(info.euler_characteristic, 0);
    EXPECT_NEAR(info.h_max, 2 * std::sin(std::numbers::pi / 32), 1e-14);

    bispec_operators* ops = nullptr;
    ASSERT_EQ(bispec_operators_assemble(fine, BISPEC_MASS_LUMPED, &ops), BISPEC_OK);
    EXPECT_EQ(bispec_operators_order(ops), 1024);
    bispec_eigen_result* lap = nullptr;
    bispec_eigen_result* sq = nullptr;
    ASSERT_EQ(bispec_eigs(ops, BISPEC_LAPLACE, 6, BISPEC_OPERATOR_SQUARE, nullptr, &lap), BISPEC_OK);
    ASSERT_EQ(bispec_eigs(ops, BISPEC_BILAPLACE, 6, BISPEC_OPERATOR_SQUARE, nullptr, &sq), BISPEC_OK);
    ASSERT_EQ(bispec_eigen_count(lap), 6u);
    double l1 = 0, b1 = 0, res = 0;
    ASSERT_EQ(bispec_eigen_value(lap, 1, &l1, &res), BISPEC_OK);
    ASSERT_EQ(bispec_eigen_value(sq, 1, &b1, nullptr), BISPEC_OK);
    EXPECT_NEAR(l1, 2.0, 0.02);
    EXPECT_LT(res, 1e-6);
    EXPECT_NEAR(b1, l1 * l1, 1e-9 * b1);

    std::vector<double> v(1024);
    ASSERT_EQ(bispec_eigen_vector(lap, 1, v.data(), v.size()), BISPEC_OK);
    EXPECT_GT(std::abs(v[0]) + std::abs(v[1]), 0.0);
    EXPECT_EQ(bispec_eigen_vector(lap, 1, v.data(), 10), BISPEC_ERR_INVALID_ARGUMENT);

    // OperatorSquare on a consistent mass pair is refused
    bispec_operators* consistent = nullptr;
    ASSERT_EQ(bispec_operators_assemble(fine, BISPEC_MASS_CONSISTENT, &consistent), BISPEC_OK);
    bispec_eigen_result* bad = nullptr;
    EXPECT_EQ(bispec_eigs(consistent, BISPEC_BILAPLACE, 4, BISPEC_OPERATOR_SQUARE, nullptr, &bad),
        BISPEC_ERR_INVALID_ARGUMENT);
    double tak = 0;
    ASSERT_EQ(bispec_takahashi_residual(consistent, 2, &tak), BISPEC_OK);
    EXPECT_LT(tak, 0.01);

    bispec_eigen_free(lap);
    bispec_eigen_free(sq);
    bispec_operators_free(consistent);
    bispec_operators_free(ops);
    bispec_mesh_free(fine);
    bispec_mesh_free(m);
    bispec_surface_free(s);
}

TEST(CApi, NoConvergenceExposesResiduals)
{
    bispec_mesh* m = nullptr;
    ASSERT_EQ(bispec_mesh_circle(40, &m), BISPEC_OK);
    bispec_operators* ops = nullptr;
    ASSERT_EQ(bispec_operators_assemble(m, BISPEC_MASS_LUMPED, &ops), BISPEC_OK);
    bispec_solver_options o;
    bispec_solver_options_default(&o);
    o.tol = 1e-30;
    bispec_eigen_result* r = nullptr;
    EXPECT_EQ(bispec_eigs(ops, BISPEC_LAPLACE, 4, BISPEC_MIXED, &o, &r), BISPEC_ERR_NO_CONVERGENCE);
    size_t count = 0;
    const double* best = bispec_last_best_residuals(&count);
    EXPECT_GT(count, 0u);
    EXPECT_NE(best, nullptr);
    bispec_operators_free(ops);
    bispec_mesh_free(m);
}

TEST(CApi, Reports)
{
    bispec_report* all = nullptr;
    ASSERT_EQ(bispec_verify_all_minimal(4, &all), BISPEC_OK);
    EXPECT_EQ(bispec_report_passed(all), 1);
    EXPECT_GT(bispec_report_check_count(all), 10u);
    bispec_check c;
    ASSERT_EQ(bispec_report_check(all, 0, &c), BISPEC_OK);
    EXPECT_EQ(std::string(c.name), "great_sphere(1):lambda1");
    EXPECT_EQ(c.pass, 1);
    char* j = nullptr;
    ASSERT_EQ(bispec_report_to_json(all, &j), BISPEC_OK);
    EXPECT_NE(take(j).find("\"reports\""), std::string::npos);
    bispec_report_free(all);

    bispec_surface* t = nullptr;
    ASSERT_EQ(bispec_surface_product(1, 1, 0.3, &t), BISPEC_OK);
    bispec_report* r = nullptr;
    ASSERT_EQ(bispec_verify_analytic(t, 0.0, &r), BISPEC_OK);
    EXPECT_EQ(bispec_report_passed(r), 1);
    ASSERT_EQ(bispec_report_check(r, 0, &c), BISPEC_OK);
    EXPECT_EQ(std::string(c.name), "lambda1");
    EXPECT_EQ(c.expected_failure, 1);
    EXPECT_EQ(c.pass, 0);
    EXPECT_NEAR(c.measured, 1 / 0.7, 1e-12);
    bispec_report_free(r);
    bispec_surface_free(t);
}

TEST(CApi, ConvergenceReport)
{
    bispec_surface* s = nullptr;
    ASSERT_EQ(bispec_surface_great_sphere(1, &s), BISPEC_OK);
    bispec_study_options o;
    bispec_study_options_default(&o);
    o.base = 16;
    bispec_report* r = nullptr;
    ASSERT_EQ(bispec_converge(s, &o, &r), BISPEC_OK);
    char* j = nullptr;
    ASSERT_EQ(bispec_report_to_json(r, &j), BISPEC_OK);
    EXPECT_NE(take(j).find("\"estimated_rate\""), std::string::npos);
    bispec_report_free(r);
    o.levels = 2;
    EXPECT_EQ(bispec_converge(s, &o, &r), BISPEC_ERR_INVALID_ARGUMENT);
    bispec_surface_free(s);
}
