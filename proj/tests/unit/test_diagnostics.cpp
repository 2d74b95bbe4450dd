#include <doctest.h>

#include <sstream>

#include "enpp/csv.hpp"
#include "enpp/diagnostics.hpp"
#include "support.hpp"

using namespace enpp;

namespace {

VectorField taylor_green(const Grid& g) {
  return VectorField({Field::from_function(g, [](const auto& x) { return std::sin(x[0]) * std::cos(x[1]); }),
                      Field::from_function(g, [](const auto& x) { return -std::cos(x[0]) * std::sin(x[1]); })});
}

std::vector<SimState> frozen(const SimState& s, int samples, double dt) {
  std::vector<SimState> out;
  for (int k = 0; k < samples; ++k) {
    SimState c = s;
    c.t = k * dt;
    out.push_back(c);
  }
  return out;
}

}  // namespace

TEST_CASE("invariant_report: steady state is flat and clean") {
  const Grid g = make_grid(2, 16);
  const SimState rest{VectorField(g), Field::constant(g, 1.5), Field::constant(g, 1.5), 0.0, 0.0};
  const auto rep = invariant_report(frozen(rest, 6, 0.1));
  CHECK(rep.ok());
  REQUIRE(rep.samples.size() == 6);
  for (const auto& x : rep.samples) {
    CHECK(x.mass_n == rep.samples[0].mass_n);
    CHECK(x.lp_sum_2 == rep.samples[0].lp_sum_2);
    CHECK(x.lp_sum_4 == rep.samples[0].lp_sum_4);
    CHECK(x.grad_phi_l2 == 0.0);
    CHECK(x.div_u_l2 == 0.0);
  }
}

TEST_CASE("invariant_report: heat flow dissipates the L^a sums") {
  const Grid g = make_grid(2, 32);
  std::mt19937_64 rng(81);
  const Field n0 = Field::constant(g, 1.0) + 0.04 * testing::random_field(g, rng, 5, true);
  const SimState s0{VectorField(g), n0, n0, 0.0, 0.0};
  const auto traj = integrate(s0, 0.2, 20, 2);
  const auto rep = invariant_report(traj);
  CHECK(rep.ok());
  for (std::size_t k = 1; k < rep.samples.size(); ++k) {
    CHECK(rep.samples[k].lp_sum_2 < rep.samples[k - 1].lp_sum_2);
    CHECK(rep.samples[k].lp_sum_4 < rep.samples[k - 1].lp_sum_4);
    // Heat-kernel oracle for the quadratic sum.
    const Field exact = heat_propagate(n0, traj[k].t);
    CHECK(rep.samples[k].lp_sum_2 == doctest::Approx(2 * std::pow(lp_norm(exact, 2.0), 2)).epsilon(1e-9));
  }
}

TEST_CASE("invariant_report: injected faults are flagged at their time") {
  const Grid g = make_grid(2, 16);
  const Field c = Field::from_function(g, [](const auto& x) { return std::cos(x[0]); });
  const SimState s{VectorField(g), Field::constant(g, 1.0) + 0.5 * c, Field::constant(g, 1.0) - 0.5 * c, 0.0, 0.0};
  auto traj = frozen(s, 5, 0.1);
  traj[3].n = traj[3].n - Field::constant(g, 2.0);  // min n < 0, mass changes too
  const auto rep = invariant_report(traj);
  REQUIRE(rep.find("positivity_n") != nullptr);
  CHECK(rep.find("positivity_n")->first_time == doctest::Approx(0.3));
  REQUIRE(rep.find("mass_n") != nullptr);
  CHECK(rep.find("mass_n")->first_time == doctest::Approx(0.3));
  CHECK(rep.find("positivity_p") == nullptr);
  CHECK(rep.find("electroneutrality") != nullptr);

  auto bad_u = frozen(s, 3, 0.1);
  bad_u[2].u = VectorField({c, Field(g)});  // div u = -sin x
  CHECK(invariant_report(bad_u).find("divergence") != nullptr);

  auto backwards = frozen(s, 3, 0.1);
  backwards[2].t = 0.05;
  CHECK(invariant_report(backwards).find("time_order") != nullptr);
}

TEST_CASE("invariant_report: pure and bit-reproducible") {
  const Grid g = make_grid(2, 16);
  const DyadicPartition part(g);
  const Field c = Field::from_function(g, [](const auto& x) { return std::cos(x[0]) * std::cos(x[1]); });
  const SimState s{taylor_green(g), Field::constant(g, 1.0) + 0.1 * c, Field::constant(g, 1.0) - 0.1 * c, 0.0, 0.0};
  const auto traj = integrate(s, 0.2, 8, 2);
  ReportOptions opts;
  opts.besov_specs = {BesovSpec(1.6, 2, 2)};
  std::ostringstream a, b;
  write_report_csv(a, invariant_report(traj, opts, &part));
  write_report_csv(b, invariant_report(traj, opts, &part));
  CHECK(a.str() == b.str());
  const auto rows = csv::parse(a.str());
  REQUIRE(rows.size() == traj.size() + 1);
  CHECK(rows[0][0] == "t");
  CHECK(rows[0].back() == "besov_p B(s=1.6,p=2,r=2)");
  CHECK(a.str().find("\"besov_u B(s=1.6,p=2,r=2)\"") != std::string::npos);
  CHECK(a.str().find("\r\n") != std::string::npos);
}

TEST_CASE("blowup_monitor: closed forms and additivity") {
  const Grid g = make_grid(2, 32);
  const SimState rest{VectorField(g), Field(g), Field(g), 0.0, 0.0};
  CHECK(blowup_monitor(frozen(rest, 5, 0.1)).total() == 0.0);

  const SimState tg{taylor_green(g), Field(g), Field(g), 0.0, 0.0};
  const double gl = grad_linf(tg.u);
  CHECK(gl == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  const auto mon = blowup_monitor(frozen(tg, 11, 0.1));
  CHECK(mon.total() == doctest::Approx(1.0 * gl).epsilon(1e-13));
  CHECK(mon.sup_u_linf == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(mon.linf_branch() == doctest::Approx(1.0 + gl).epsilon(1e-12));
  for (std::size_t k = 1; k < mon.integral.size(); ++k) CHECK(mon.integral[k] >= mon.integral[k - 1]);

  const auto threshold = blowup_monitor(frozen(tg, 11, 0.1), 0.5);
  CHECK(threshold.exceeded);

  const Field c = Field::from_function(g, [](const auto& x) { return std::cos(x[0]) * std::cos(x[1]); });
  const SimState ctg{taylor_green(g), Field::constant(g, 1.0) + 0.1 * c, Field::constant(g, 1.0) - 0.1 * c, 0.0, 0.0};
  const auto traj = integrate(ctg, 0.4, 8, 1);
  const std::vector<SimState> first(traj.begin(), traj.begin() + 5);
  const std::vector<SimState> second(traj.begin() + 4, traj.end());
  const double whole = blowup_monitor(traj).total();
  CHECK(std::abs(whole - blowup_monitor(first).total() - blowup_monitor(second).total()) <= 1e-12 * whole);
}

TEST_CASE("blowup_monitor: 2D Taylor-Green grows at most linearly") {
  const Grid g = make_grid(2, 32);
  const Field c = Field::from_function(g, [](const auto& x) { return std::cos(x[0]) * std::cos(x[1]); });
  const SimState s{taylor_green(g), Field::constant(g, 1.0) + 0.1 * c, Field::constant(g, 1.0) - 0.1 * c, 0.0, 0.0};
  const auto traj = integrate(s, 1.0, 40, 1);
  const std::vector<SimState> half(traj.begin(), traj.begin() + 21);
  const double i1 = blowup_monitor(half).total(), i2 = blowup_monitor(traj).total();
  CHECK(i2 <= 2.0 * i1 * 1.05);
}

TEST_CASE("besov_trajectory: constant, heat decay and recomputation") {
  const Grid g = make_grid(2, 64);
  const DyadicPartition part(g);
  const Field s8 = Field::from_function(g, [](const auto& x) { return std::sin(8 * x[0]); });
  const SimState st{VectorField(g), s8, s8, 0.0, 0.0};
  const BesovSpec spec(1.0, 2, 2);
  const auto flat = besov_trajectory(frozen(st, 4, 0.1), {spec}, kInf, part);
  CHECK(flat.series[0].aggregate_n == doctest::Approx(besov_norm(s8, spec, part)).epsilon(1e-14));

  const auto heat = integrate(st, 0.05, 10, 1);
  const auto table = besov_trajectory(heat, {spec}, 2.0, part);
  for (std::size_t k = 0; k < heat.size(); ++k) {
    CHECK(table.series[0].n[k] == doctest::Approx(std::exp(-64 * heat[k].t) * table.series[0].n[0]).epsilon(1e-8));
  }
  // Aggregate from raw block norms, left rectangle in time.
  double acc = 0.0;
  for (int j = -1; j <= part.j_max(); ++j) {
    double tj = 0.0;
    for (std::size_t k = 0; k + 1 < heat.size(); ++k) tj += 0.005 * std::pow(lp_norm(dyadic_block(heat[k].n, j, part), 2.0), 2);
    acc += std::pow(2.0, 2 * j) * tj;
  }
  CHECK(table.series[0].aggregate_n == doctest::Approx(std::sqrt(acc)).epsilon(1e-12));
}

TEST_CASE("csv: quoting, numbers and parsing") {
  CHECK(csv::escape("plain") == "plain");
  CHECK(csv::escape("a,b") == "\"a,b\"");
  CHECK(csv::escape("say \"hi\"") == "\"say \"\"hi\"\"\"");
  CHECK(csv::format_number(0.1) == "0.1");
  CHECK(csv::format_number(kInf) == "inf");
  CHECK(csv::format_number(-kInf) == "-inf");
  CHECK(std::stod(csv::format_number(1.0 / 3.0)) == 1.0 / 3.0);
  std::ostringstream out;
  csv::write_row(out, {"x", "a,b", "q\""});
  CHECK(out.str() == "x,\"a,b\",\"q\"\"\"\r\n");
  const auto rows = csv::parse(out.str() + "1,2,3\n");
  REQUIRE(rows.size() == 2);
  CHECK(rows[0] == std::vector<std::string>{"x", "a,b", "q\""});
  CHECK(rows[1] == std::vector<std::string>{"1", "2", "3"});
}
