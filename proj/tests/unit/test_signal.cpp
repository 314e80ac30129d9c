#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "reference.hpp"
#include "superres/error.hpp"
#include "superres/measurement.hpp"
#include "superres/signal.hpp"

using namespace superres;

namespace {

std::string error_name(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.name();
  }
  return "<no error>";
}

SpikeSignal random_signal(reftest::Gen& gen, std::size_t d) {
  const auto x = gen.separated_nodes(d, 0.05, -1.0, 1.0);
  std::vector<Complex> a;
  for (std::size_t j = 0; j < d; ++j) a.emplace_back(gen.uniform(-2, 2), gen.uniform(-2, 2));
  return make_signal(a, x);
}

}  // namespace

TEST(MakeSignal, Singleton) {
  const auto f = make_positive_signal(std::vector<double>{1.0}, std::vector<double>{0.0});
  EXPECT_EQ(f.size(), 1u);
  EXPECT_TRUE(f.positive());
}

TEST(MakeSignal, SortsNodesWithAmplitudes) {
  const auto f = make_real_signal(std::vector<double>{2.0, 3.0}, std::vector<double>{5.0, 1.0});
  EXPECT_EQ(f.nodes(), (std::vector<double>{1.0, 5.0}));
  EXPECT_EQ(f.real_amplitudes(), (std::vector<double>{3.0, 2.0}));
}

TEST(MakeSignal, RejectsNonPositiveWhenRequired) {
  EXPECT_EQ(error_name([] { make_positive_signal(std::vector<double>{1.0, -1.0}, std::vector<double>{0.0, 1.0}); }),
            "non-positive amplitude");
  const std::vector<Complex> complex_amp{{1.0, 0.5}};
  EXPECT_EQ(error_name([&] { make_signal(complex_amp, std::vector<double>{0.0}, true); }), "non-positive amplitude");
}

TEST(MakeSignal, RejectsDuplicatesAndBadInput) {
  EXPECT_EQ(error_name([] { make_real_signal(std::vector<double>{1.0, 2.0}, std::vector<double>{0.3, 0.3}); }),
            "degenerate signal");
  EXPECT_EQ(error_name([] { make_real_signal(std::vector<double>{1.0}, std::vector<double>{NAN}); }),
            "degenerate signal");
  EXPECT_EQ(error_name([] { make_real_signal(std::vector<double>{}, std::vector<double>{}); }), "invalid argument");
  EXPECT_EQ(error_name([] { make_real_signal(std::vector<double>{1.0}, std::vector<double>{0.0, 1.0}); }),
            "invalid argument");
}

TEST(MakeSignal, PositiveFlagOnlyWhenAllPositive) {
  EXPECT_TRUE(make_real_signal(std::vector<double>{1.0, 2.0}, std::vector<double>{0.0, 1.0}).positive());
  EXPECT_FALSE(make_real_signal(std::vector<double>{1.0, -2.0}, std::vector<double>{0.0, 1.0}).positive());
  const std::vector<Complex> a{{1.0, 0.0}};
  EXPECT_FALSE(make_signal(a, std::vector<double>{0.0}).positive());
}

TEST(FourierAt, Examples) {
  const auto origin = make_positive_signal(std::vector<double>{1.0}, std::vector<double>{0.0});
  for (double s : {-3.0, 0.0, 0.7, 11.0}) {
    EXPECT_EQ(fourier_at(origin, s), Complex(1.0, 0.0));
  }
  const auto pair = make_positive_signal(std::vector<double>{1.0, 1.0}, std::vector<double>{-0.25, 0.25});
  EXPECT_NEAR(std::abs(fourier_at(pair, 1.0)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(fourier_at(pair, 0.0) - Complex(2.0, 0.0)), 0.0, 1e-15);
}

TEST(FourierAt, MatchesReferenceAndIsBounded) {
  reftest::Gen gen(11);
  for (int trial = 0; trial < 200; ++trial) {
    const auto f = random_signal(gen, 1 + gen.index(6));
    double mass = 0.0;
    for (const auto& a : f.amplitudes()) mass += std::abs(a);
    const double s = gen.uniform(-20, 20);
    const Complex v = fourier_at(f, s);
    EXPECT_NEAR(std::abs(v - reftest::fourier(f.nodes(), f.amplitudes(), s)), 0.0, 1e-12);
    EXPECT_LE(std::abs(v), mass * (1 + 1e-15));
    EXPECT_EQ(fourier_at(f, 0.0), moments(f, 0)[0]);
  }
}

TEST(FourierAt, DerivativeIdentity) {
  reftest::Gen gen(12);
  const double step = 1e-6;
  for (int trial = 0; trial < 100; ++trial) {
    const auto f = random_signal(gen, 1 + gen.index(5));
    const double s = gen.uniform(-5, 5);
    const Complex fd = (fourier_at(f, s + step) - fourier_at(f, s - step)) / (2 * step);
    Complex exact{};
    for (std::size_t j = 0; j < f.size(); ++j) {
      const double x = f.nodes()[j];
      exact += Complex(0.0, -2.0 * std::numbers::pi) * f.amplitudes()[j] * x *
               std::polar(1.0, -2.0 * std::numbers::pi * x * s);
    }
    if (std::abs(exact) < 1e-3) continue;  // relative error meaningless near a zero of the derivative
    EXPECT_LT(std::abs(fd - exact) / std::abs(exact), 1e-5) << "trial " << trial;
  }
}

TEST(Moments, Examples) {
  const auto f = make_positive_signal(std::vector<double>{2.0, 3.0}, std::vector<double>{1.0, 2.0});
  const auto m = moments(f, 2);
  ASSERT_EQ(m.size(), 3u);
  EXPECT_EQ(m[0], Complex(5.0));
  EXPECT_EQ(m[1], Complex(8.0));
  EXPECT_EQ(m[2], Complex(14.0));

  const auto sym = make_positive_signal(std::vector<double>{1.0, 1.0}, std::vector<double>{-0.7, 0.7});
  const auto ms = real_moments(sym, 9);
  for (int k = 1; k <= 9; k += 2) EXPECT_EQ(ms[k], 0.0);

  const auto origin = make_positive_signal(std::vector<double>{1.0}, std::vector<double>{0.0});
  EXPECT_EQ(real_moments(origin, 3), (std::vector<double>{1.0, 0.0, 0.0, 0.0}));
}

TEST(ScaleSignal, Examples) {
  const auto f = make_positive_signal(std::vector<double>{1.0, 1.0}, std::vector<double>{1.0, 2.0});
  const auto g = scale_signal(f, 2.0);
  EXPECT_EQ(g.nodes(), (std::vector<double>{0.5, 1.0}));
  EXPECT_EQ(g.real_amplitudes(), (std::vector<double>{1.0, 1.0}));
  EXPECT_EQ(scale_signal(f, 1.0), f);
  EXPECT_TRUE(g.positive());
}

TEST(ScaleSignal, InversePairAndMomentIdentity) {
  reftest::Gen gen(13);
  for (int trial = 0; trial < 100; ++trial) {
    const auto x = gen.separated_nodes(1 + gen.index(5), 0.05, -1.0, 1.0);
    std::vector<double> a;
    for (std::size_t j = 0; j < x.size(); ++j) a.push_back(gen.uniform(0.5, 2.0));
    const auto f = make_positive_signal(a, x);
    for (double t : {0.5, 2.0, 10.0}) {
      const auto back = scale_signal(scale_signal(f, t), 1.0 / t);
      for (std::size_t j = 0; j < f.size(); ++j) EXPECT_NEAR(back.nodes()[j], f.nodes()[j], 1e-15);
      const auto scaled = real_moments(scale_signal(f, t), 10);
      for (int k = 0; k <= 10; ++k) {
        const long double want = reftest::moment(x, a, k) / std::pow(static_cast<long double>(t), k);
        EXPECT_NEAR(scaled[k], static_cast<double>(want), 1e-12 * std::max(1.0L, std::abs(want)));
      }
    }
  }
}

TEST(TranslateSignal, FourierPhaseModulation) {
  reftest::Gen gen(14);
  for (int trial = 0; trial < 50; ++trial) {
    const auto f = random_signal(gen, 3);
    const double c = gen.uniform(-0.5, 0.5);
    const auto g = translate_signal(f, c);
    const double s = gen.uniform(-4, 4);
    const Complex want = std::polar(1.0, -2.0 * std::numbers::pi * c * s) * fourier_at(f, s);
    EXPECT_NEAR(std::abs(fourier_at(g, s) - want), 0.0, 1e-12);
  }
}

TEST(SubAndMerge, RoundTrip) {
  const auto f = make_positive_signal(std::vector<double>{1, 2, 3, 4}, std::vector<double>{0.0, 0.1, 0.5, 0.9});
  const auto head = sub_signal(f, 0, 2);
  const auto tail = sub_signal(f, 2, 2);
  EXPECT_EQ(merge_signals(head, tail), f);
  EXPECT_EQ(merge_signals(tail, head), f);
  EXPECT_EQ(error_name([&] { merge_signals(head, head); }), "degenerate signal");
  EXPECT_EQ(error_name([&] { sub_signal(f, 3, 2); }), "invalid argument");
}

TEST(Gaps, MinimumGaps) {
  const auto f = make_positive_signal(std::vector<double>{1, 1, 1}, std::vector<double>{0.0, 0.1, 0.5});
  EXPECT_DOUBLE_EQ(min_node_gap(f), 0.1);
  EXPECT_DOUBLE_EQ(min_gap_to_others(f.nodes(), 2), 0.4);
  EXPECT_TRUE(std::isinf(min_node_gap(make_positive_signal(std::vector<double>{1}, std::vector<double>{0}))));
}
