// Batched Stockham FFT for sizes 2^a * 3^b.
//
// The toolkit only ever transforms cubes of side n (a power of two) or the
// 3/2-dealiased side 3n/2, so radices 2 and 3 cover every size exactly and
// the transform stays self-contained: no planner, no runtime tuning, and a
// fixed operation order, which keeps repeated runs bit-identical.
//
// Layout convention for execute(): `blocks` independent sequences of length
// n are stored contiguously; each sequence element is itself a contiguous
// run of `batch` complex values. A 3-D cube (x fastest) is transformed as
//   axis x: batch 1,   blocks n*n
//   axis y: batch n,   blocks n
//   axis z: batch n*n, blocks 1
// so butterflies over the batch run over contiguous memory.

#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace paley::fft {

template <typename Real>
class Plan {
 public:
  using Complex = std::complex<Real>;

  explicit Plan(int n) : n_(n) {
    if (n < 2) throw std::invalid_argument("fft: length must be >= 2");
    std::vector<int> factors;
    int r = n;
    while (r % 3 == 0) {
      factors.push_back(3);
      r /= 3;
    }
    while (r % 2 == 0) {
      factors.push_back(2);
      r /= 2;
    }
    if (r != 1) throw std::invalid_argument("fft: length must be 2^a * 3^b");

    for (int sign = 0; sign < 2; ++sign) {
      auto& stages = sign ? inv_ : fwd_;
      int nc = n;
      for (int f : factors) {
        Stage st;
        st.radix = f;
        st.m = nc / f;
        st.tw.resize(static_cast<std::size_t>(st.m) * (f - 1));
        for (int p = 0; p < st.m; ++p)
          for (int c = 1; c < f; ++c) {
            const double ang = (sign ? 2.0 : -2.0) * kPi * p * c / nc;
            st.tw[static_cast<std::size_t>(p) * (f - 1) + (c - 1)] =
                Complex(static_cast<Real>(std::cos(ang)), static_cast<Real>(std::sin(ang)));
          }
        stages.push_back(std::move(st));
        nc /= f;
      }
    }
  }

  int size() const { return n_; }

  // In-place transform; `work` must hold n*batch complexes. `scale` is
  // applied exactly once (folded into the first stage).
  void forward(Complex* data, Complex* work, std::size_t batch, std::size_t blocks,
               Real scale = Real(1)) const {
    run<false>(data, work, batch, blocks, scale);
  }
  void inverse(Complex* data, Complex* work, std::size_t batch, std::size_t blocks,
               Real scale = Real(1)) const {
    run<true>(data, work, batch, blocks, scale);
  }

 private:
  static constexpr double kPi = 3.141592653589793238462643383279502884;

  struct Stage {
    int radix;
    int m;                    // butterfly groups at this stage
    std::vector<Complex> tw;  // tw[p*(radix-1) + c-1], p < m
  };

  template <bool Scaled>
  static void stage2(const Stage& st, std::size_t s, const Complex* x, Complex* y, Real scale) {
    for (int p = 0; p < st.m; ++p) {
      const Complex w = st.tw[static_cast<std::size_t>(p)];
      const Complex* xa = x + s * static_cast<std::size_t>(p);
      const Complex* xb = xa + s * static_cast<std::size_t>(st.m);
      Complex* y0 = y + s * static_cast<std::size_t>(2 * p);
      Complex* y1 = y0 + s;
      for (std::size_t q = 0; q < s; ++q) {
        Complex a = xa[q], b = xb[q];
        if constexpr (Scaled) {
          a *= scale;
          b *= scale;
        }
        y0[q] = a + b;
        y1[q] = (a - b) * w;
      }
    }
  }

  template <bool Inv, bool Scaled>
  static void stage3(const Stage& st, std::size_t s, const Complex* x, Complex* y, Real scale) {
    // DFT-3 via the usual t1/t2/t3 form; +i sqrt(3)/2 flips sign for the inverse.
    constexpr Real kSq = Real(Inv ? 0.86602540378443864676 : -0.86602540378443864676);
    for (int p = 0; p < st.m; ++p) {
      const Complex w1 = st.tw[static_cast<std::size_t>(p) * 2];
      const Complex w2 = st.tw[static_cast<std::size_t>(p) * 2 + 1];
      const Complex* x0 = x + s * static_cast<std::size_t>(p);
      const Complex* x1 = x0 + s * static_cast<std::size_t>(st.m);
      const Complex* x2 = x1 + s * static_cast<std::size_t>(st.m);
      Complex* y0 = y + s * static_cast<std::size_t>(3 * p);
      Complex* y1 = y0 + s;
      Complex* y2 = y1 + s;
      for (std::size_t q = 0; q < s; ++q) {
        Complex a0 = x0[q], a1 = x1[q], a2 = x2[q];
        if constexpr (Scaled) {
          a0 *= scale;
          a1 *= scale;
          a2 *= scale;
        }
        const Complex t1 = a1 + a2;
        const Complex t2 = a0 - Real(0.5) * t1;
        const Complex t3(-kSq * (a1.imag() - a2.imag()), kSq * (a1.real() - a2.real()));
        y0[q] = a0 + t1;
        y1[q] = (t2 + t3) * w1;
        y2[q] = (t2 - t3) * w2;
      }
    }
  }

  template <bool Inv>
  void run(Complex* data, Complex* work, std::size_t batch, std::size_t blocks,
           Real scale) const {
    const auto& stages = Inv ? inv_ : fwd_;
    const std::size_t block_len = static_cast<std::size_t>(n_) * batch;
    const bool scaled = scale != Real(1);
    for (std::size_t blk = 0; blk < blocks; ++blk) {
      Complex* src = data + blk * block_len;
      Complex* buf[2] = {src, work};
      int cur = 0;
      std::size_t s = batch;
      bool first = true;
      for (const auto& st : stages) {
        const bool sc = scaled && first;
        if (st.radix == 2) {
          sc ? stage2<true>(st, s, buf[cur], buf[1 - cur], scale)
             : stage2<false>(st, s, buf[cur], buf[1 - cur], scale);
        } else {
          sc ? stage3<Inv, true>(st, s, buf[cur], buf[1 - cur], scale)
             : stage3<Inv, false>(st, s, buf[cur], buf[1 - cur], scale);
        }
        s *= static_cast<std::size_t>(st.radix);
        cur = 1 - cur;
        first = false;
      }
      if (cur != 0)
        for (std::size_t i = 0; i < block_len; ++i) src[i] = work[i];
    }
  }

  int n_;
  std::vector<Stage> fwd_, inv_;
};

// Complex 3-D transform on a cube of side n, x fastest.
template <typename Real>
class Cube {
 public:
  using Complex = std::complex<Real>;

  explicit Cube(int n) : n_(n), plan_(n) {}

  int side() const { return n_; }
  std::size_t size() const { return static_cast<std::size_t>(n_) * n_ * n_; }

  void forward(Complex* a, Real scale = Real(1)) const {
    std::vector<Complex> work(size());
    const auto nn = static_cast<std::size_t>(n_);
    plan_.forward(a, work.data(), 1, nn * nn, scale);
    plan_.forward(a, work.data(), nn, nn);
    plan_.forward(a, work.data(), nn * nn, 1);
  }

  void inverse(Complex* a, Real scale = Real(1)) const {
    std::vector<Complex> work(size());
    const auto nn = static_cast<std::size_t>(n_);
    plan_.inverse(a, work.data(), 1, nn * nn, scale);
    plan_.inverse(a, work.data(), nn, nn);
    plan_.inverse(a, work.data(), nn * nn, 1);
  }

 private:
  int n_;
  Plan<Real> plan_;
};

}  // namespace paley::fft
