#include "causal/error.hpp"
#include "causal/synthetic.hpp"

#include <doctest.h>

#include <cmath>

using namespace causal;

TEST_CASE("default parameters")
{
    const CoupledDifferenceParams p;
    CHECK(p.r_x == 3.8);
    CHECK(p.r_y == 3.5);
    CHECK(p.beta_y_to_x == 0.02);
    CHECK(p.beta_x_to_y == 0.1);
    CHECK(p.x0 == 0.4);
    CHECK(p.y0 == 0.2);
    CHECK(p.transient == 100);
    CHECK(p.form == CouplingForm::canonical);
}

TEST_CASE("uncoupled maps started at their fixed points stay there")
{
    // With r = 3.8 and 3.5 the fixed point is unstable and rounding drifts
    // away from it; growth rates below 3 make it attracting.
    CoupledDifferenceParams p;
    p.r_x = 2.5;
    p.r_y = 2.8;
    p.beta_x_to_y = 0.0;
    p.beta_y_to_x = 0.0;
    p.x0 = (p.r_x - 1.0) / p.r_x;
    p.y0 = (p.r_y - 1.0) / p.r_y;
    const auto [x, y] = simulate(p, 200);
    for (std::size_t t = 0; t < x.size(); ++t) {
        CHECK(x[t] == doctest::Approx(p.x0).epsilon(1e-14));
        CHECK(y[t] == doctest::Approx(p.y0).epsilon(1e-14));
    }
}

TEST_CASE("default run is bounded and aperiodic")
{
    const auto [x, y] = simulate(CoupledDifferenceParams{}, 1000);
    REQUIRE(x.size() == 1000);
    REQUIRE(y.size() == 1000);
    for (std::size_t t = 0; t < x.size(); ++t) {
        CHECK(x[t] > 0.0);
        CHECK(x[t] < 1.0);
        CHECK(y[t] > 0.0);
        CHECK(y[t] < 1.0);
    }
    for (std::size_t period = 1; period <= 4; ++period) {
        bool repeats = true;
        for (std::size_t t = x.size() - 100; t + period < x.size(); ++t) {
            repeats = repeats && std::abs(x[t + period] - x[t]) < 1e-9 && std::abs(y[t + period] - y[t]) < 1e-9;
        }
        CHECK_FALSE(repeats);
    }
}

TEST_CASE("iteration follows the canonical update")
{
    CoupledDifferenceParams p;
    p.transient = 0;
    const auto [x, y] = simulate(p, 6);
    CHECK(x[0] == p.x0);
    CHECK(y[0] == p.y0);
    double xs = p.x0;
    double ys = p.y0;
    for (std::size_t t = 1; t < 6; ++t) {
        const double xn = xs * (p.r_x - p.r_x * xs - p.beta_y_to_x * ys);
        const double yn = ys * (p.r_y - p.r_y * ys - p.beta_x_to_y * xs);
        xs = xn;
        ys = yn;
        CHECK(x[t] == xs);
        CHECK(y[t] == ys);
    }
}

TEST_CASE("simulation is deterministic")
{
    const auto a = simulate(CoupledDifferenceParams{}, 500);
    const auto b = simulate(CoupledDifferenceParams{}, 500);
    for (std::size_t t = 0; t < 500; ++t) {
        CHECK(a.first[t] == b.first[t]);
        CHECK(a.second[t] == b.second[t]);
    }
}

TEST_CASE("without coupling x does not depend on y0")
{
    CoupledDifferenceParams p;
    p.beta_x_to_y = 0.0;
    p.beta_y_to_x = 0.0;
    CoupledDifferenceParams q = p;
    q.y0 = 0.7;
    CoupledDifferenceParams r = p;
    r.x0 = 0.65;
    const auto a = simulate(p, 300);
    const auto b = simulate(q, 300);
    const auto c = simulate(r, 300);
    for (std::size_t t = 0; t < 300; ++t) {
        CHECK(a.first[t] == b.first[t]);
        CHECK(a.second[t] == c.second[t]);
    }
}

TEST_CASE("verbatim coupling form differs from the canonical one")
{
    CoupledDifferenceParams p;
    p.form = CouplingForm::verbatim;
    p.transient = 0;
    const auto canonical = simulate(CoupledDifferenceParams{.transient = 0}, 3);
    const auto verbatim = simulate(p, 3);
    CHECK(canonical.second[1] != verbatim.second[1]);
    CHECK(verbatim.second[1] == doctest::Approx(p.y0 * (p.r_y - p.r_y * p.x0 - p.beta_x_to_y * p.x0)));
}

TEST_CASE("invalid parameters and divergence")
{
    CoupledDifferenceParams p;
    p.x0 = 1.0;
    CHECK_THROWS_AS(simulate(p, 10), Error);
    p.x0 = 0.4;
    p.r_x = std::nan("");
    CHECK_THROWS_AS(simulate(p, 10), Error);

    CoupledDifferenceParams wild;
    wild.r_x = 6.0;
    try {
        simulate(wild, 1000);
        FAIL("expected divergence");
    } catch (const Error &e) {
        CHECK(e.code() == Errc::Diverged);
        CHECK(std::string(e.what()).find("step") != std::string::npos);
    }
    CHECK_THROWS_AS(simulate(CoupledDifferenceParams{}, 0), Error);
}
