#include <gtest/gtest.h>

#include <sstream>

#include "oracles.hpp"
#include "vsphere/energy.hpp"
#include "vsphere/io.hpp"

using namespace vsphere;

namespace {

const Params kUnit{1.0, 1.0};

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  return out;
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string l;
  while (std::getline(ss, l)) out.push_back(l);
  return out;
}

Trajectory<4> plane_run() {
  IntegratorOptions o;
  o.record_every = 0.5;
  EventSpec<4> ev;
  ev.kind = EventKind::AntipodalPassage;
  ev.g = [](double, const Vec<4>& s) { return s[0]; };
  return integrate<4>(plane_field(kUnit), {1.0, 0.5, -0.6, 0.1}, 0.0, 20.0, o, {ev});
}

}  // namespace

TEST(Fmt, RoundTripsSeventeenDigits) {
  for (double v : {oracle::kH1, oracle::kRStar, -1e-300, 1.0 / 3.0, 6.02214076e23}) {
    EXPECT_EQ(std::stod(fmt(v)), v);
  }
  EXPECT_EQ(fmt(0.5), "0.5");
  EXPECT_EQ(fmt(kNaN), "nan");
  EXPECT_EQ(fmt(INFINITY), "inf");
  EXPECT_EQ(fmt(-INFINITY), "-inf");
}

TEST(StateNames, PerChart) {
  EXPECT_EQ(state_names(Chart::Plane, 4), (std::vector<std::string>{"x", "y", "px", "py"}));
  EXPECT_EQ(state_names(Chart::SphereAngles, 4), (std::vector<std::string>{"phi", "theta", "p_phi_s", "p_theta"}));
  EXPECT_EQ(state_names(Chart::SphereAngles, 2), (std::vector<std::string>{"theta", "p_theta"}));
  EXPECT_EQ(state_names(Chart::McGeheeTau, 4), (std::vector<std::string>{"r_s", "alpha", "zx", "zy"}));
  EXPECT_EQ(state_names(Chart::AngularSigma, 3), (std::vector<std::string>{"r_s", "alpha", "psi"}));
  EXPECT_EQ(state_names(Chart::AngularSigma, 2), (std::vector<std::string>{"alpha", "psi"}));
}

TEST(TrajectoryCsv, HeaderAndValues) {
  const Trajectory<4> tr = plane_run();
  std::ostringstream os;
  write_trajectory_csv<4>(os, tr, plane_extras(kUnit));
  const auto ls = lines(os.str());
  ASSERT_EQ(ls.size(), tr.size() + 1);
  EXPECT_EQ(ls[0], "time,x,y,px,py,energy,p_phi,r,E_hat");
  for (std::size_t i = 0; i < tr.size(); ++i) {
    const auto cells = split(ls[i + 1]);
    ASSERT_EQ(cells.size(), 9u);
    EXPECT_EQ(std::stod(cells[0]), tr.times[i]);
    for (int c = 0; c < 4; ++c) EXPECT_EQ(std::stod(cells[1 + c]), tr.states[i][c]);
    EXPECT_EQ(std::stod(cells[5]), hamiltonian_plane(tr.states[i], kUnit));
    EXPECT_EQ(cells[6], "nan");
    const McGeheeState m = plane_to_mcgehee(PlaneState::from_array(tr.states[i]), kUnit);
    EXPECT_EQ(std::stod(cells[7]), m.r);
    // On the shell, the E_hat column equals r^2 / l (h - k log b).
    const double h = oracle::K_mech(tr.states[0], 1.0, 1.0);
    EXPECT_NEAR(std::stod(cells[8]), oracle::e_hat(h, m.r, m.alpha, 1.0, 1.0), 1e-8);
  }
}

TEST(TrajectoryCsv, SphereAndSigmaColumns) {
  IntegratorOptions o;
  const auto sph = integrate<4>(sphere_vortex_field(kUnit, VortexAt::NorthPole), {0.0, 2.0, 0.3, 0.1}, 0.0, 1.0, o);
  std::ostringstream a;
  write_trajectory_csv<4>(a, sph, sphere_extras(kUnit, VortexAt::NorthPole));
  EXPECT_EQ(lines(a.str())[0], "time,phi,theta,p_phi_s,p_theta,energy,p_phi,r,E_hat");
  EXPECT_EQ(split(lines(a.str())[1])[6], fmt(0.3));

  const auto sig = integrate<3>(sigma_field(kUnit, 0.2), {0.5, 1.0, 2.0}, 0.0, 1.0, o);
  std::ostringstream b;
  write_trajectory_csv<3>(b, sig, sigma_extras(kUnit, 0.2));
  EXPECT_EQ(lines(b.str())[0], "time,r_s,alpha,psi,energy,p_phi,r,E_hat");
  const auto first = split(lines(b.str())[1]);
  EXPECT_EQ(first[4], fmt(0.2));
  EXPECT_EQ(first[6], fmt(0.5));
  EXPECT_EQ(std::stod(first[7]), e_hat(0.2, 0.5, 1.0, kUnit));
}

TEST(EventsCsv, RowsPerEvent) {
  const Trajectory<4> tr = plane_run();
  ASSERT_FALSE(tr.events.empty());
  std::ostringstream os;
  write_events_csv<4>(os, tr);
  const auto ls = lines(os.str());
  ASSERT_EQ(ls.size(), tr.events.size() + 1);
  EXPECT_EQ(ls[0], "time,kind,x,y,px,py");
  for (std::size_t i = 0; i < tr.events.size(); ++i) {
    const auto cells = split(ls[i + 1]);
    EXPECT_EQ(std::stod(cells[0]), tr.events[i].time);
    EXPECT_EQ(cells[1], "AntipodalPassage");
    EXPECT_EQ(std::stod(cells[2]), tr.events[i].state[0]);
  }
}

TEST(TrajectoryCsv, Deterministic) {
  std::ostringstream a, b;
  write_trajectory_csv<4>(a, plane_run(), plane_extras(kUnit));
  write_trajectory_csv<4>(b, plane_run(), plane_extras(kUnit));
  EXPECT_EQ(a.str(), b.str());
}
