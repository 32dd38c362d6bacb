#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "pan/errors.hpp"
#include "pan/poisson_field.hpp"
#include "pan/rng.hpp"
#include "support/oracles.hpp"

using namespace pan;

TEST_CASE("zero intensity gives an empty field") {
    PoissonField f = sample_field(Box::centered_cube(0.5), 0.0, 77);
    CHECK(f.points.empty());
}

TEST_CASE("sampling rejects bad inputs") {
    CHECK_THROWS_AS(sample_field(Box::centered_cube(1.0), -1.0, 0), domain_error);
    Box degenerate{{0, 0, 0}, {1, 0, 1}};
    CHECK_THROWS_AS(sample_field(degenerate, 1.0, 0), domain_error);
}

TEST_CASE("replay determinism and window confinement") {
    Box w = Box::centered_cube(1.0);
    PoissonField a = sample_field(w, 3.0, 123), b = sample_field(w, 3.0, 123);
    REQUIRE(a.points.size() == b.points.size());
    for (std::size_t i = 0; i < a.points.size(); ++i) {
        CHECK(a.points[i].x == b.points[i].x);
        CHECK(w.contains(a.points[i]));
    }
}

TEST_CASE("mean count matches intensity times volume") {
    Box w = Box::centered_cube(1.0); // volume 8
    const int reps = 10000;
    double s = 0.0;
    for (int i = 0; i < reps; ++i)
        s += static_cast<double>(sample_field(w, 1.0, 1000 + i).points.size());
    double mean = s / reps;
    CHECK(std::fabs(mean - 8.0) < 3.0 * std::sqrt(8.0 / reps));
}

TEST_CASE("count_in_cell basics and window guard") {
    PoissonField f;
    f.window = Box::centered_cube(2.0);
    f.points = {{0, 0, 0}, {0.5, 0, 0}, {1.2, 1.2, 1.2}};
    CHECK(count_in_cell(f, {0, 0, 0}, 0.1, CellShape::ball) == 1);
    CHECK(count_in_cell(f, {0, 0, 0}, 0.6, CellShape::ball) == 2);
    CHECK(count_in_cell(f, {0, 0, 0}, 1.3, CellShape::cube) == 3);
    CHECK_THROWS_AS(count_in_cell(f, {1.5, 0, 0}, 0.6, CellShape::ball), out_of_window_error);
    f.points.clear();
    CHECK(count_in_cell(f, {0, 0, 0}, 1.0, CellShape::ball) == 0);
}

TEST_CASE("P(count >= 3) in a ball matches the exact Poisson tail") {
    const double rho = 0.5;
    const double v = 4.0 * oracle::pi / 3.0 * rho * rho * rho;
    const double p_exact = 1.0 - oracle::poisson_cdf_brute(v, 2);
    const int reps = 20000;
    int hits = 0;
    for (int i = 0; i < reps; ++i) {
        PoissonField f = sample_field(Box::centered_cube(4.0), 1.0, 5000 + i);
        if (count_in_cell(f, {0, 0, 0}, rho, CellShape::ball) >= 3) ++hits;
    }
    double p = static_cast<double>(hits) / reps;
    CHECK(std::fabs(p - p_exact) < 3.0 * std::sqrt(p_exact * (1 - p_exact) / reps));
}

TEST_CASE("homogeneity: count distribution is translation invariant") {
    // chi^2 over counts {0,1,2,>=3} between a centered and a shifted unit ball
    const int reps = 10000;
    long long obs[2][4] = {};
    for (int i = 0; i < reps; ++i) {
        PoissonField f = sample_field(Box::centered_cube(4.0), 0.5, 31000 + i);
        auto bin = [](long long n) { return n > 3 ? 3 : static_cast<int>(n); };
        ++obs[0][bin(count_in_cell(f, {0, 0, 0}, 0.62, CellShape::ball))];
        ++obs[1][bin(count_in_cell(f, {1.7, -1.3, 0.4}, 0.62, CellShape::ball))];
    }
    double chi2 = 0.0;
    for (int k = 0; k < 4; ++k) {
        double tot = static_cast<double>(obs[0][k] + obs[1][k]);
        if (tot == 0.0) continue;
        double e = tot / 2.0;
        chi2 += (obs[0][k] - e) * (obs[0][k] - e) / e + (obs[1][k] - e) * (obs[1][k] - e) / e;
    }
    CHECK(chi2 < 16.3); // chi^2_3 at p = 0.001
}

TEST_CASE("disjoint cell counts are uncorrelated") {
    const int reps = 10000;
    double sx = 0, sy = 0, sxy = 0, sxx = 0, syy = 0;
    for (int i = 0; i < reps; ++i) {
        PoissonField f = sample_field(Box::centered_cube(3.0), 1.0, 91000 + i);
        double x = static_cast<double>(count_in_cell(f, {-1.2, 0, 0}, 0.8, CellShape::ball));
        double y = static_cast<double>(count_in_cell(f, {1.2, 0, 0}, 0.8, CellShape::ball));
        sx += x;
        sy += y;
        sxy += x * y;
        sxx += x * x;
        syy += y * y;
    }
    double n = reps;
    double corr = (n * sxy - sx * sy) /
                  std::sqrt((n * sxx - sx * sx) * (n * syy - sy * sy));
    CHECK(std::fabs(corr) < 3.0 / std::sqrt(n));
}

TEST_CASE("max over lattice: basics") {
    PoissonField f;
    f.window = Box::centered_cube(5.0);
    LatticeSpec lat{1.0, 0.3, 2.0, CellShape::ball};
    CHECK(max_count_over_lattice(f, lat) == 0);
    f.points = {{1.0, 1.0, 0.0}};
    CHECK(max_count_over_lattice(f, lat) == 1);
    f.points.push_back({1.05, 1.0, 0.0});
    CHECK(max_count_over_lattice(f, lat) == 2);
    LatticeSpec big{1.0, 0.3, 10.0, CellShape::ball};
    CHECK_THROWS_AS(max_count_over_lattice(f, big), out_of_window_error);
}

TEST_CASE("lattice cell count matches brute force") {
    LatticeSpec lat{1.5, 0.3, 7.2, CellShape::ball};
    long long brute = 0;
    for (int ix = -10; ix <= 10; ++ix)
        for (int iy = -10; iy <= 10; ++iy)
            for (int iz = -10; iz <= 10; ++iz)
                if (Vec3{ix * 1.5, iy * 1.5, iz * 1.5}.norm() <= 7.2) ++brute;
    CHECK(lattice_cell_count(lat) == brute);
}

TEST_CASE("empirical max-count CDF matches the independent-cell oracle") {
    LatticeSpec lat{1.0, 0.4, 2.0, CellShape::ball}; // disjoint balls
    const long long N = lattice_cell_count(lat);
    const double v = 4.0 * oracle::pi / 3.0 * 0.4 * 0.4 * 0.4;
    const int reps = 20000;
    int le1 = 0;
    for (int i = 0; i < reps; ++i) {
        PoissonField f = sample_field(Box::centered_cube(3.0), 1.0, 150000 + i);
        if (max_count_over_lattice(f, lat) <= 1) ++le1;
    }
    double p_exact = exact_max_count_cdf(N, v, 1);
    double p = static_cast<double>(le1) / reps;
    CHECK(std::fabs(p - p_exact) < 3.0 * std::sqrt(p_exact * (1 - p_exact) / reps));
}

TEST_CASE("exact max count cdf closed forms") {
    CHECK(exact_max_count_cdf(1, std::log(2.0), 0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(exact_max_count_cdf(50, 0.3, 200) == doctest::Approx(1.0).epsilon(1e-12));
    double brute = std::pow(oracle::poisson_cdf_brute(0.1, 1), 100.0);
    CHECK(exact_max_count_cdf(100, 0.1, 1) == doctest::Approx(brute).epsilon(1e-12));
    CHECK_THROWS_AS(exact_max_count_cdf(10, 1.0, -1), domain_error);
    CHECK_THROWS_AS(exact_max_count_cdf(0, 1.0, 1), domain_error);
    // huge cell counts stay finite and in (0,1)
    double p = exact_max_count_cdf(20000000000ll, 1e-5, 2);
    CHECK(p > 0.0);
    CHECK(p < 1.0);
}

TEST_CASE("association: disjoint cells factorize, overlap dominates product") {
    Box w = Box::centered_cube(4.0);
    Box c1{{-2, -1, -1}, {0, 1, 1}};
    Box c2{{1, -1, -1}, {3, 1, 1}};
    AssociationResult disjoint =
        check_association(w, 0.4, {c1, c2}, {2, 2}, Direction::geq, 20000, 9);
    CHECK(std::fabs(disjoint.joint.mean - disjoint.product) < 3.0 * disjoint.joint.stderr_);

    Box o1{{0, 0, 0}, {1, 1, 1}};
    Box o2{{0.5, 0, 0}, {1.5, 1, 1}};
    AssociationResult overlap =
        check_association(w, 1.0, {o1, o2}, {2, 2}, Direction::geq, 20000, 10);
    CHECK(overlap.joint.mean + 3.0 * overlap.joint.stderr_ >= overlap.product);
    // identical cells: joint equals the marginal, strictly above the squared marginal
    AssociationResult same = check_association(w, 1.0, {o1, o1}, {1, 1}, Direction::geq, 20000, 11);
    double marginal = 1.0 - std::exp(-1.0);
    CHECK(std::fabs(same.joint.mean - marginal) < 3.0 * same.joint.stderr_);
    CHECK(same.product == doctest::Approx(marginal * marginal).epsilon(1e-12));
    CHECK(same.joint.mean > same.product);
}

TEST_CASE("association input guards") {
    Box w = Box::centered_cube(1.0);
    Box inside{{0, 0, 0}, {0.5, 0.5, 0.5}};
    CHECK_THROWS_AS(check_association(w, 1.0, {inside}, {1}, Direction::geq, 50, 1), domain_error);
    Box outside{{0, 0, 0}, {2, 1, 1}};
    CHECK_THROWS_AS(check_association(w, 1.0, {outside}, {1}, Direction::geq, 1000, 1),
                    out_of_window_error);
}
