// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <complex>

#include "oracles.hpp"
#include "pixelwpt/antenna.hpp"
#include "pixelwpt/rng.hpp"

using namespace pixelwpt;
using Complex = std::complex<double>;

namespace {

AntennaCoder make_coder(std::initializer_list<double> vals, CoderMode mode) {
  AntennaCoder c;
  c.mode = mode;
  c.b.resize(static_cast<Eigen::Index>(vals.size()));
  Eigen::Index i = 0;
  for (double v : vals) c.b(i++) = v;
  return c;
}

MultiportNetwork tiny_network(Complex z_pp, Complex z_pa, int k = 2) {
  MultiportNetwork net;
  net.q = 1;
  net.k = k;
  net.z.resize(2, 2);
  net.z << Complex(50.0, 0.0), z_pa, z_pa, z_pp;
  net.e_oc = oracles::random_complex_matrix(2 * k, 2, 5);
  return net;
}

}  // namespace

TEST_CASE("load impedance maps coder entries to j x_oc b") {
  AntennaConfig cfg;
  const auto z0 = load_impedance(make_coder({0.0}, CoderMode::Binary), cfg);
  CHECK(z0(0) == Complex(0.0, 0.0));

  const auto z1 = load_impedance(make_coder({1.0}, CoderMode::Binary), cfg);
  CHECK(z1(0) == Complex(0.0, 1e9));

  const auto zc = load_impedance(make_coder({0.5}, CoderMode::Continuous), cfg);
  CHECK(zc(0) == Complex(0.0, 5e8));
  CHECK(z1(0).real() == 0.0);
}

TEST_CASE("coder validation rejects out-of-domain entries") {
  AntennaConfig cfg;
  CHECK_THROWS_AS(
      load_impedance(make_coder({0.5}, CoderMode::Binary), cfg), Error);
  CHECK_THROWS_AS(
      load_impedance(make_coder({1.5}, CoderMode::Continuous), cfg), Error);
}

TEST_CASE("open switch kills the pixel current") {
  AntennaConfig cfg;
  const auto net = tiny_network(Complex(10.0, 5.0), Complex(0.0, 2.0));
  const auto i_p = port_currents(net, make_coder({1.0}, CoderMode::Binary), cfg);
  CHECK(std::abs(i_p(0)) < 1e-7);
}

TEST_CASE("single-port short-circuit current solves by hand") {
  AntennaConfig cfg;
  const auto net = tiny_network(Complex(10.0, 0.0), Complex(2.0, 0.0));
  const auto i_p = port_currents(net, make_coder({0.0}, CoderMode::Binary), cfg);
  CHECK(std::abs(i_p(0) - Complex(-0.2, 0.0)) < 1e-14);
}

TEST_CASE("port currents match a naive dense solve") {
  AntennaConfig cfg;
  const MultiportNetwork net = synthesize_antenna(31, 3, 4, 3, cfg);
  Philox rng(77, 0);
  for (int trial = 0; trial < 10; ++trial) {
    AntennaCoder coder;
    coder.mode = CoderMode::Binary;
    coder.b.resize(3);
    for (int i = 0; i < 3; ++i) coder.b(i) = static_cast<double>(rng.below(2));
    const Eigen::VectorXcd i_p = port_currents(net, coder, cfg);

    Eigen::MatrixXcd loaded = net.z.bottomRightCorner(3, 3);
    for (int i = 0; i < 3; ++i)
      loaded(i, i) += Complex(0.0, cfg.x_oc * coder.b(i));
    const Eigen::VectorXcd rhs = net.z.col(0).tail(3) * cfg.unit_excitation;
    const Eigen::VectorXcd want = -oracles::naive_solve(loaded, rhs);
    CHECK((i_p - want).norm() <= 1e-10 * std::max(want.norm(), 1e-30));
  }
}

TEST_CASE("singular loaded network is rejected") {
  AntennaConfig cfg;
  MultiportNetwork net;
  net.q = 2;
  net.k = 2;
  net.z.resize(3, 3);
  // Z_PP rows nearly dependent.
  net.z << Complex(50, 0), Complex(1, 0), Complex(1, 0),
      Complex(1, 0), Complex(1.0, 0.0), Complex(1.0, 0.0),
      Complex(1, 0), Complex(1.0, 0.0), Complex(1.0 + 1e-16, 0.0);
  net.e_oc = oracles::random_complex_matrix(4, 3, 3);
  AntennaCoder coder = make_coder({0.0, 0.0}, CoderMode::Binary);
  CHECK_THROWS_AS(port_currents(net, coder, cfg), SingularLoadedNetwork);
}

TEST_CASE("basis truncation counts equal-energy singular values") {
  AntennaConfig cfg;
  // e_oc with singular values (1, 1, 1, ~0).
  const int two_k = 8;
  const int n = 4;
  Eigen::MatrixXcd g1 = oracles::random_complex_matrix(two_k, n, 21);
  Eigen::MatrixXcd g2 = oracles::random_complex_matrix(n, n, 22);
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr1(g1);
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr2(g2);
  const Eigen::MatrixXcd u0 =
      qr1.householderQ() * Eigen::MatrixXcd::Identity(two_k, n);
  const Eigen::MatrixXcd v0 =
      qr2.householderQ() * Eigen::MatrixXcd::Identity(n, n);
  Eigen::VectorXd sv(n);
  sv << 1.0, 1.0, 1.0, 1e-16;
  MultiportNetwork net;
  net.q = n - 1;
  net.k = two_k / 2;
  net.z = Eigen::MatrixXcd::Identity(n, n) * 50.0;
  net.e_oc = u0 * sv.asDiagonal() * v0.adjoint();
  const PatternBasis basis = compute_basis(net, cfg);
  CHECK(basis.n_eff == 3);
}

TEST_CASE("paper-scale synthetic antenna has seven basis patterns") {
  AntennaConfig cfg;
  const MultiportNetwork net = synthesize_antenna(1, 39, 72, 7, cfg);
  CHECK_NOTHROW(validate(net));
  const PatternBasis basis = compute_basis(net, cfg);
  CHECK(basis.n_eff == 7);
}

TEST_CASE("basis factors are semi-unitary and capture the energy budget") {
  AntennaConfig cfg;
  MultiportNetwork net;
  net.q = 9;
  net.k = 8;
  net.z = Eigen::MatrixXcd::Identity(10, 10) * 50.0;
  net.e_oc = oracles::random_complex_matrix(16, 10, 55);
  const PatternBasis basis = compute_basis(net, cfg);

  const Eigen::MatrixXcd iu =
      basis.u.adjoint() * basis.u -
      Eigen::MatrixXcd::Identity(basis.n_eff, basis.n_eff);
  const Eigen::MatrixXcd iv =
      basis.v.adjoint() * basis.v -
      Eigen::MatrixXcd::Identity(basis.n_eff, basis.n_eff);
  CHECK(iu.cwiseAbs().maxCoeff() < 1e-10);
  CHECK(iv.cwiseAbs().maxCoeff() < 1e-10);
  for (int i = 1; i < basis.n_eff; ++i) CHECK(basis.s(i) <= basis.s(i - 1));
  CHECK(basis.s(basis.n_eff - 1) > 0.0);

  const Eigen::MatrixXcd recon =
      basis.u * basis.s.asDiagonal() * basis.v.adjoint();
  const double residual = (net.e_oc - recon).squaredNorm();
  CHECK(residual <=
        (1.0 - cfg.power_fraction) * net.e_oc.squaredNorm() + 1e-12);

  // Full-SVD oracle: the retained singular values match the leading ones.
  Eigen::BDCSVD<Eigen::MatrixXcd> full(net.e_oc);
  for (int i = 0; i < basis.n_eff; ++i)
    CHECK(std::abs(basis.s(i) - full.singularValues()(i)) <=
          1e-10 * full.singularValues()(0));
}

TEST_CASE("zero pattern matrix is rejected") {
  AntennaConfig cfg;
  MultiportNetwork net;
  net.q = 2;
  net.k = 2;
  net.z = Eigen::MatrixXcd::Identity(3, 3) * 50.0;
  net.e_oc = Eigen::MatrixXcd::Zero(4, 3);
  CHECK_THROWS_AS(compute_basis(net, cfg), ZeroPatternMatrix);
}

TEST_CASE("pattern coders are unit norm and synthesize unit-norm patterns") {
  AntennaConfig cfg;
  const MultiportNetwork net = synthesize_antenna(3, 6, 6, 4, cfg);
  const PatternBasis basis = compute_basis(net, cfg);
  Philox rng(5, 0);
  for (int trial = 0; trial < 8; ++trial) {
    AntennaCoder coder;
    coder.mode = CoderMode::Binary;
    coder.b.resize(6);
    for (int i = 0; i < 6; ++i) coder.b(i) = static_cast<double>(rng.below(2));
    for (Side side : {Side::Transmit, Side::Receive}) {
      const Eigen::VectorXcd w = pattern_coder(basis, net, coder, cfg, side);
      CHECK(std::abs(w.norm() - 1.0) < 1e-12);
      CHECK(std::abs((basis.u * w).norm() - 1.0) < 1e-12);
    }
  }
}

TEST_CASE("transmit pattern coder matches an independent composition") {
  AntennaConfig cfg;
  const MultiportNetwork net = synthesize_antenna(13, 6, 6, 4, cfg);
  const PatternBasis basis = compute_basis(net, cfg);
  Philox rng(6, 0);
  AntennaCoder coder;
  coder.mode = CoderMode::Binary;
  coder.b.resize(6);
  for (int i = 0; i < 6; ++i) coder.b(i) = static_cast<double>(rng.below(2));

  // Oracle route: naive solve for the currents, then entrywise S V^H i.
  Eigen::MatrixXcd loaded = net.z.bottomRightCorner(6, 6);
  for (int i = 0; i < 6; ++i)
    loaded(i, i) += Complex(0.0, cfg.x_oc * coder.b(i));
  const Eigen::VectorXcd i_p =
      -oracles::naive_solve(loaded, net.z.col(0).tail(6));
  Eigen::VectorXcd i_all(7);
  i_all(0) = Complex(1.0, 0.0);
  i_all.tail(6) = i_p;
  Eigen::VectorXcd t = Eigen::VectorXcd::Zero(basis.n_eff);
  for (int r = 0; r < basis.n_eff; ++r)
    for (int c = 0; c < 7; ++c)
      t(r) += basis.s(r) * std::conj(basis.v(c, r)) * i_all(c);
  const Eigen::VectorXcd want = t / t.norm();

  const Eigen::VectorXcd got =
      pattern_coder(basis, net, coder, cfg, Side::Transmit);
  CHECK((got - want).norm() < 1e-10);
}

TEST_CASE("receive coder applies the transpose-conjugate convention") {
  AntennaConfig cfg;
  const MultiportNetwork net = synthesize_antenna(19, 5, 5, 3, cfg);
  const PatternBasis basis = compute_basis(net, cfg);
  AntennaCoder coder;
  coder.mode = CoderMode::Binary;
  coder.b.resize(5);
  coder.b << 1, 0, 1, 1, 0;

  const Eigen::VectorXcd i_p = port_currents(net, coder, cfg);
  Eigen::VectorXcd i_all(6);
  i_all(0) = cfg.unit_excitation;
  i_all.tail(5) = i_p;
  Eigen::VectorXcd t =
      basis.s.asDiagonal() * (basis.v.transpose() * i_all.conjugate());
  const Eigen::VectorXcd want = t / t.norm();
  const Eigen::VectorXcd got =
      pattern_coder(basis, net, coder, cfg, Side::Receive);
  CHECK((got - want).norm() < 1e-14);

  // With real singular values the receive coder is the conjugate of the
  // transmit coder.
  const Eigen::VectorXcd wt =
      pattern_coder(basis, net, coder, cfg, Side::Transmit);
  CHECK((got - wt.conjugate()).norm() < 1e-12);
}

TEST_CASE("binary coders evaluate identically through the continuous path") {
  AntennaConfig cfg;
  const MultiportNetwork net = synthesize_antenna(23, 8, 8, 5, cfg);
  const PatternBasis basis = compute_basis(net, cfg);
  Philox rng(8, 0);
  for (int trial = 0; trial < 6; ++trial) {
    AntennaCoder bin;
    bin.mode = CoderMode::Binary;
    bin.b.resize(8);
    for (int i = 0; i < 8; ++i) bin.b(i) = static_cast<double>(rng.below(2));
    AntennaCoder cont = bin;
    cont.mode = CoderMode::Continuous;
    for (Side side : {Side::Transmit, Side::Receive}) {
      const Eigen::VectorXcd w_bin = pattern_coder(basis, net, bin, cfg, side);
      const Eigen::VectorXcd w_cont =
          pattern_coder(basis, net, cont, cfg, side);
      const Eigen::VectorXcd w_react = pattern_coder_reactance(
          basis, net, (cfg.x_oc * bin.b).eval(), cfg, side);
      CHECK((w_bin - w_cont).norm() < 1e-12);
      CHECK((w_bin - w_react).norm() < 1e-12);
    }
  }
}

TEST_CASE("radiation pattern synthesis") {
  AntennaConfig cfg;
  const MultiportNetwork net = synthesize_antenna(29, 6, 8, 4, cfg);
  const PatternBasis basis = compute_basis(net, cfg);

  Eigen::VectorXcd e1 = Eigen::VectorXcd::Zero(basis.n_eff);
  e1(0) = 1.0;
  CHECK((radiation_pattern(basis, e1) - basis.u.col(0)).norm() < 1e-15);

  Philox rng(12, 0);
  Eigen::VectorXcd w(basis.n_eff);
  for (int i = 0; i < basis.n_eff; ++i) w(i) = rng.complex_normal();
  w.normalize();
  const Eigen::VectorXcd e = radiation_pattern(basis, w);
  CHECK(std::abs(e.norm() - 1.0) < 1e-12);
  Eigen::VectorXcd want = Eigen::VectorXcd::Zero(2 * net.k);
  for (int r = 0; r < 2 * net.k; ++r)
    for (int c = 0; c < basis.n_eff; ++c) want(r) += basis.u(r, c) * w(c);
  CHECK((e - want).norm() < 1e-12);

  Eigen::VectorXcd wrong = Eigen::VectorXcd::Ones(basis.n_eff + 1);
  CHECK_THROWS_AS(radiation_pattern(basis, wrong), DimensionMismatch);
}

TEST_CASE("synthesized antennas are deterministic and seed sensitive") {
  AntennaConfig cfg;
  const MultiportNetwork a = synthesize_antenna(1, 10, 16, 4, cfg);
  const MultiportNetwork b = synthesize_antenna(1, 10, 16, 4, cfg);
  CHECK((a.z - b.z).cwiseAbs().maxCoeff() == 0.0);
  CHECK((a.e_oc - b.e_oc).cwiseAbs().maxCoeff() == 0.0);

  const MultiportNetwork c = synthesize_antenna(2, 10, 16, 4, cfg);
  CHECK((a.z - c.z).norm() > 0.0);

  CHECK((a.z - a.z.transpose()).cwiseAbs().maxCoeff() == 0.0);
  CHECK_NOTHROW(validate(a));
  CHECK(compute_basis(a, cfg).n_eff == 4);

  CHECK_THROWS_AS(synthesize_antenna(1, 3, 2, 5, cfg), InfeasibleRank);
}

TEST_CASE("all-open coder reproduces the antenna-port pattern direction") {
  AntennaConfig cfg;
  const MultiportNetwork net = synthesize_antenna(41, 10, 16, 4, cfg);
  AntennaCoder coder;
  coder.mode = CoderMode::Binary;
  coder.b = Eigen::VectorXd::Ones(10);
  const Eigen::VectorXcd i_p = port_currents(net, coder, cfg);

  const Eigen::VectorXcd z_pa = net.z.col(0).tail(10);
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(net.z.bottomRightCorner(10, 10));
  const double sigma_min = svd.singularValues()(9);
  CHECK(i_p.cwiseAbs().maxCoeff() <= 1e-6 * z_pa.norm() / sigma_min);

  Eigen::VectorXcd i_all(11);
  i_all(0) = cfg.unit_excitation;
  i_all.tail(10) = i_p;
  const Eigen::VectorXcd e = (net.e_oc * i_all).normalized();
  const Eigen::VectorXcd e_a = net.e_oc.col(0).normalized();
  const double cosang = std::min(std::abs(e_a.dot(e)), 1.0);
  CHECK(std::sqrt(1.0 - cosang * cosang) < 1e-5);
}

TEST_CASE("antenna json round trip is bit exact") {
  AntennaConfig cfg;
  const MultiportNetwork net = synthesize_antenna(7, 6, 8, 4, cfg);
  const std::string text = antenna_to_json_text(net);
  const MultiportNetwork back = antenna_from_json_text(text);
  CHECK(back.q == net.q);
  CHECK(back.k == net.k);
  CHECK((back.z - net.z).cwiseAbs().maxCoeff() == 0.0);
  CHECK((back.e_oc - net.e_oc).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("antenna loader reports the first violated invariant") {
  AntennaConfig cfg;
  MultiportNetwork net = synthesize_antenna(7, 4, 6, 3, cfg);
  net.z(0, 1) += Complex(0.5, 0.0);  // break reciprocity
  const std::string text = antenna_to_json_text(net);
  CHECK_THROWS_WITH_AS(antenna_from_json_text(text),
                       doctest::Contains("reciprocity"), Error);
}
