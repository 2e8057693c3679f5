#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "evgrid/behavior.hpp"
#include "evgrid/errors.hpp"

using namespace evgrid;

namespace {

SessionRecord session(double start_min, double end_min, double energy) {
    return SessionRecord{"u", start_min, end_min, energy};
}

double u01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// normal-equation oracle: theta = [X^T X]^-1 X^T y for the one-column case,
// written out as the explicit matrix product rather than the folded ratio
double theta_normal_equation(const std::vector<SessionRecord>& s) {
    double xtx = 0.0;
    for (const auto& r : s) {
        double d = (r.end_min - r.start_min) / 60.0;
        xtx += d * d;
    }
    double inv = 1.0 / xtx;
    double theta = 0.0;
    for (const auto& r : s) {
        double d = (r.end_min - r.start_min) / 60.0;
        theta += inv * d * r.energy_kwh;
    }
    return theta;
}

}  // namespace

TEST_CASE("predict_window takes plain means") {
    std::vector<SessionRecord> s{session(9 * 60, 17 * 60, 1),
                                 session(9 * 60 + 30, 18 * 60, 1)};
    auto [start, end] = predict_window(s);
    CHECK(start == doctest::Approx(9 * 60 + 15.0));  // 09:15
    CHECK(end == doctest::Approx(17 * 60 + 30.0));   // 17:30

    std::vector<SessionRecord> one{session(8 * 60, 16 * 60, 5)};
    auto [s1, e1] = predict_window(one);
    CHECK(s1 == 8 * 60.0);
    CHECK(e1 == 16 * 60.0);

    std::vector<SessionRecord> three{session(8 * 60, 17 * 60, 1),
                                     session(9 * 60, 17 * 60, 1),
                                     session(10 * 60, 17 * 60, 1)};
    CHECK(predict_window(three).first == doctest::Approx(9 * 60.0));

    CHECK_THROWS_AS(predict_window(std::vector<SessionRecord>{}), NoData);
}

TEST_CASE("fit_energy_model") {
    std::vector<SessionRecord> proportional{session(0, 60, 2), session(0, 120, 4),
                                            session(0, 180, 6)};
    CHECK(fit_energy_model(proportional) == doctest::Approx(2.0));

    std::vector<SessionRecord> single{session(0, 120, 5)};
    CHECK(fit_energy_model(single) == doctest::Approx(2.5));

    // durations [1, 3] h, energies [3, 5] kWh: theta = (1*3 + 3*5)/(1 + 9)
    std::vector<SessionRecord> two{session(0, 60, 3), session(0, 180, 5)};
    CHECK(fit_energy_model(two) == doctest::Approx(1.8));
    CHECK(fit_energy_model(two) == doctest::Approx(theta_normal_equation(two)));

    std::vector<SessionRecord> degenerate{session(60, 60, 3)};
    CHECK_THROWS_AS(fit_energy_model(degenerate), SingularModel);
    CHECK_THROWS_AS(fit_energy_model(std::vector<SessionRecord>{}), NoData);
}

TEST_CASE("predict_energy") {
    CHECK(predict_energy(2.0, 0, 8 * 60) == doctest::Approx(16.0));
    CHECK(predict_energy(0.0, 0, 5 * 60) == 0.0);
    CHECK(predict_energy(1.8, 9 * 60 + 15, 17 * 60 + 30) == doctest::Approx(14.85));
    CHECK_THROWS_AS(predict_energy(2.0, 100, 100), InvalidInput);
    CHECK_THROWS_AS(predict_energy(-1.0, 0, 60), InvalidInput);
}

TEST_CASE("forecast_user composes consistently") {
    std::vector<SessionRecord> s{session(9 * 60, 10 * 60, 2),
                                 session(9 * 60, 11 * 60, 4),
                                 session(9 * 60, 12 * 60, 6)};
    auto f = forecast_user(s);
    CHECK(f.theta_kwh_per_h == doctest::Approx(2.0));
    CHECK(f.sample_count == 3);
    CHECK(f.valid());
    CHECK(f.energy_pred_kwh ==
          doctest::Approx(f.theta_kwh_per_h *
                          (f.t_end_pred_min - f.t_start_pred_min) / 60.0));

    std::vector<SessionRecord> one{session(8 * 60, 16 * 60, 12)};
    auto f1 = forecast_user(one);
    CHECK(f1.t_start_pred_min == 8 * 60.0);
    CHECK(f1.t_end_pred_min == 16 * 60.0);
    CHECK(f1.theta_kwh_per_h == doctest::Approx(1.5));
}

TEST_CASE("matrix and ratio forms of theta agree on random samples") {
    std::mt19937_64 rng(17);
    for (int rep = 0; rep < 100; ++rep) {
        std::size_t m = 1 + rng() % 30;
        std::vector<SessionRecord> s;
        for (std::size_t i = 0; i < m; ++i) {
            double start = 300.0 + 400.0 * u01(rng);
            double dur = 30.0 + 600.0 * u01(rng);
            s.push_back(session(start, start + dur, 40.0 * u01(rng)));
        }
        double t1 = fit_energy_model(s);
        double t2 = theta_normal_equation(s);
        CHECK(std::fabs(t1 - t2) <= 1e-12 * std::max(1.0, std::fabs(t2)));
        CHECK(t1 >= 0.0);
    }
}

TEST_CASE("scale equivariance and permutation invariance") {
    std::mt19937_64 rng(23);
    for (int rep = 0; rep < 20; ++rep) {
        std::size_t m = 2 + rng() % 10;
        std::vector<SessionRecord> s;
        for (std::size_t i = 0; i < m; ++i) {
            double start = 300.0 + 300.0 * u01(rng);
            double dur = 60.0 + 400.0 * u01(rng);
            s.push_back(session(start, start + dur, 1.0 + 20.0 * u01(rng)));
        }
        auto f = forecast_user(s);

        double alpha = 0.5 + 4.0 * u01(rng);
        auto scaled = s;
        for (auto& r : scaled) r.energy_kwh *= alpha;
        auto fs = forecast_user(scaled);
        CHECK(fs.theta_kwh_per_h == doctest::Approx(alpha * f.theta_kwh_per_h));
        CHECK(fs.energy_pred_kwh == doctest::Approx(alpha * f.energy_pred_kwh));
        CHECK(fs.t_start_pred_min == f.t_start_pred_min);
        CHECK(fs.t_end_pred_min == f.t_end_pred_min);

        auto shuffled = s;
        std::shuffle(shuffled.begin(), shuffled.end(), rng);
        auto fp = forecast_user(shuffled);
        CHECK(fp.theta_kwh_per_h == doctest::Approx(f.theta_kwh_per_h));
        CHECK(fp.t_start_pred_min == doctest::Approx(f.t_start_pred_min));
        CHECK(fp.energy_pred_kwh == doctest::Approx(f.energy_pred_kwh));
    }
}
