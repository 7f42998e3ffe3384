#include "causal/error.hpp"
#include "causal/measures.hpp"
#include "causal/synthetic.hpp"
#include "causal/timeseries.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

using namespace causal;

namespace
{

Errc code_of(const auto &fn)
{
    try {
        fn();
    } catch (const Error &e) {
        return e.code();
    }
    FAIL("expected an error");
    return Errc::InvalidArgument;
}

} // namespace

TEST_CASE("time series rejects non-finite values")
{
    CHECK(code_of([] { TimeSeries({1.0, std::nan("")}); }) == Errc::NonFinite);
    CHECK(code_of([] { TimeSeries({std::numeric_limits<double>::infinity()}); }) == Errc::NonFinite);
    const TimeSeries s({1.0, 2.0}, "a");
    CHECK(s.label() == "a");
    CHECK(s.size() == 2);
}

TEST_CASE("log returns of simple price paths")
{
    const TimeSeries flat = log_returns(TimeSeries({1.0, 1.0, 1.0}));
    CHECK(flat.size() == 2);
    CHECK(flat[0] == 0.0);
    CHECK(flat[1] == 0.0);

    const double e = std::numbers::e;
    const TimeSeries unit = log_returns(TimeSeries({1.0, e, e * e}));
    CHECK(unit[0] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(unit[1] == doctest::Approx(1.0).epsilon(1e-15));

    const TimeSeries r = log_returns(TimeSeries({100.0, 101.0, 99.5}));
    CHECK(r[0] == doctest::Approx(std::log(1.01)).epsilon(1e-14));
    CHECK(r[1] == doctest::Approx(std::log(99.5 / 101.0)).epsilon(1e-14));
}

TEST_CASE("log returns reject short and non-positive input")
{
    CHECK(code_of([] { log_returns(TimeSeries({1.0})); }) == Errc::TooShort);
    CHECK(code_of([] { log_returns(TimeSeries({1.0, 0.0, 2.0})); }) == Errc::NonPositivePrice);
    CHECK(code_of([] { log_returns(TimeSeries({1.0, -3.0})); }) == Errc::NonPositivePrice);
}

TEST_CASE("exponentiated cumulative log returns recover the prices")
{
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> step(-0.05, 0.05);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> prices{50.0 + trial};
        for (int t = 0; t < 500; ++t) {
            prices.push_back(prices.back() * std::exp(step(rng)));
        }
        const TimeSeries r = log_returns(TimeSeries(prices));
        double cum = 0.0;
        for (std::size_t t = 0; t < r.size(); ++t) {
            cum += r[t];
            const double rebuilt = prices.front() * std::exp(cum);
            REQUIRE(std::abs(rebuilt - prices[t + 1]) <= 1e-12 * prices[t + 1]);
        }
    }
}

TEST_CASE("rolling window layout")
{
    std::vector<double> v(12);
    for (std::size_t i = 0; i < v.size(); ++i) {
        v[i] = static_cast<double>(i + 1);
    }

    const auto single = rolling_windows(std::span<const double>(v).first(10), RollingConfig{10, 1});
    REQUIRE(single.size() == 1);
    CHECK(single[0].front() == 1.0);
    CHECK(single[0].back() == 10.0);

    const auto two = rolling_windows(v, RollingConfig{10, 2});
    REQUIRE(two.size() == 2);
    CHECK(two[0].front() == 1.0);
    CHECK(two[0].back() == 10.0);
    CHECK(two[1].front() == 3.0);
    CHECK(two[1].back() == 12.0);
}

TEST_CASE("rolling window count on 12784 returns follows the floor formula")
{
    // The often quoted figure for this layout is 594 windows; the formula gives 590.
    CHECK(window_count(12784, RollingConfig{1000, 20}) == 590);
    CHECK(window_count(12785, RollingConfig{1000, 20}) == 590);
}

TEST_CASE("rolling window count matches the closed form over random triples")
{
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<std::size_t> len_dist(1, 5000);
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t len = len_dist(rng);
        const std::size_t window = std::uniform_int_distribution<std::size_t>(1, len)(rng);
        const std::size_t stride = std::uniform_int_distribution<std::size_t>(1, 300)(rng);
        const RollingConfig cfg{window, stride};
        std::size_t enumerated = 0;
        for (std::size_t start = 0; start + window <= len; start += stride) {
            ++enumerated;
        }
        const std::size_t closed = (len - window) / stride + 1;
        REQUIRE(window_count(len, cfg) == closed);
        REQUIRE(enumerated == closed);
        if (len <= 2000) {
            const std::vector<double> zeros(len, 0.0);
            REQUIRE(rolling_windows(zeros, cfg).size() == closed);
        }
    }
}

TEST_CASE("rolling configuration validation")
{
    CHECK(code_of([] { RollingConfig{11, 1}.validate(10); }) == Errc::WindowTooLarge);
    CHECK(code_of([] { RollingConfig{0, 1}.validate(10); }) == Errc::InvalidArgument);
    CHECK(code_of([] { RollingConfig{5, 0}.validate(10); }) == Errc::InvalidArgument);
    CHECK(window_count(5, RollingConfig{6, 1}) == 0);
}

TEST_CASE("measure series invariants")
{
    CHECK_NOTHROW(MeasureSeries({1.0, 2.0}, {3, 5}));
    CHECK_THROWS_AS(MeasureSeries({1.0, 2.0}, {3}), Error);
    CHECK_THROWS_AS(MeasureSeries({1.0, 2.0}, {5, 5}), Error);
    CHECK_THROWS_AS(MeasureSeries({1.0, 2.0}, {6, 5}), Error);
}

TEST_CASE("rolling apply with constant and identity measures")
{
    const std::vector<double> x = oracle::uniform_sample(100, 1);
    const auto ones = rolling_apply(x, x, RollingConfig{20, 10},
                                    [](std::span<const double>, std::span<const double>) { return 1.0; });
    REQUIRE(ones.size() == 9);
    for (std::size_t i = 0; i < ones.size(); ++i) {
        CHECK(ones[i] == 1.0);
        CHECK(ones.window_ends()[i] == 19 + 10 * i);
    }
    const auto self = rolling_apply(x, x, RollingConfig{20, 10},
                                    [](std::span<const double> a, std::span<const double> b) { return pearson(a, b); });
    for (double v : self.values()) {
        CHECK(v == doctest::Approx(1.0).epsilon(1e-14));
    }
}

TEST_CASE("rolling pearson on the coupled pair matches per-window oracle correlations")
{
    const auto [x, y] = simulate(CoupledDifferenceParams{}, 3000);
    const RollingConfig cfg{500, 25};
    const auto rolled = rolling_apply(x, y, cfg, [](std::span<const double> a, std::span<const double> b) {
        return pearson(a, b);
    });
    const auto wx = rolling_windows(x, cfg);
    const auto wy = rolling_windows(y, cfg);
    REQUIRE(rolled.size() == wx.size());
    bool negative = false;
    bool positive = false;
    for (std::size_t w = 0; w < wx.size(); ++w) {
        CHECK(rolled[w] == doctest::Approx(oracle::pearson(wx[w], wy[w])).epsilon(1e-12));
        negative = negative || rolled[w] < 0.0;
        positive = positive || rolled[w] > 0.0;
    }
    CHECK(negative);
    CHECK(positive);
}

TEST_CASE("rolling apply is independent of the thread count and annotates errors")
{
    const std::vector<double> x = oracle::uniform_sample(400, 3);
    const std::vector<double> y = oracle::uniform_sample(400, 4);
    auto measure = [](std::span<const double> a, std::span<const double> b) { return pearson(a, b); };
    const auto one = rolling_apply(x, y, RollingConfig{50, 7}, measure, 1);
    const auto four = rolling_apply(x, y, RollingConfig{50, 7}, measure, 4);
    REQUIRE(one.size() == four.size());
    for (std::size_t i = 0; i < one.size(); ++i) {
        CHECK(one[i] == four[i]);
    }

    std::vector<double> flat(x);
    std::fill(flat.begin() + 100, flat.begin() + 200, 0.5);
    try {
        rolling_apply(flat, y, RollingConfig{50, 50}, measure, 3);
        FAIL("expected an error");
    } catch (const Error &e) {
        CHECK(e.code() == Errc::ConstantSeries);
        CHECK(std::string(e.what()).find("window 2") != std::string::npos);
    }
    CHECK(code_of([&] { rolling_apply(x, std::span<const double>(y).first(300), RollingConfig{50, 7}, measure); }) ==
          Errc::LengthMismatch);
}
