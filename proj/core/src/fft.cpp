#include "railmap/fft.hpp"

#include <cmath>

#include "railmap/parallel.hpp"

namespace railmap {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

using Cplx = std::complex<double>;

void transform_rows(std::vector<Cplx>& grid, std::size_t w, std::size_t h, bool inverse) {
  parallel_for(static_cast<std::int64_t>(h), [&](std::int64_t begin, std::int64_t end) {
    std::vector<Cplx> row(w);
    for (std::int64_t y = begin; y < end; ++y) {
      Cplx* base = grid.data() + static_cast<std::size_t>(y) * w;
      row.assign(base, base + w);
      fft_inplace(row, inverse);
      std::copy(row.begin(), row.end(), base);
    }
  });
}

void transform_cols(std::vector<Cplx>& grid, std::size_t w, std::size_t h, bool inverse) {
  parallel_for(static_cast<std::int64_t>(w), [&](std::int64_t begin, std::int64_t end) {
    std::vector<Cplx> col(h);
    for (std::int64_t x = begin; x < end; ++x) {
      for (std::size_t y = 0; y < h; ++y) col[y] = grid[y * w + static_cast<std::size_t>(x)];
      fft_inplace(col, inverse);
      for (std::size_t y = 0; y < h; ++y) grid[y * w + static_cast<std::size_t>(x)] = col[y];
    }
  });
}

}  // namespace

std::size_t next_pow2(std::size_t n) noexcept {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

void fft_inplace(std::vector<Cplx>& a, bool inverse) {
  const std::size_t n = a.size();
  if (n == 0 || (n & (n - 1)) != 0)
    fail(ErrorCategory::validation, "fft length must be a power of two");
  // bit-reversal permutation
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = (inverse ? kTwoPi : -kTwoPi) / static_cast<double>(len);
    const Cplx wlen(std::cos(ang), std::sin(ang));
    for (std::size_t i = 0; i < n; i += len) {
      Cplx w(1.0, 0.0);
      for (std::size_t k = 0; k < len / 2; ++k) {
        const Cplx u = a[i + k];
        const Cplx v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
        w *= wlen;
      }
    }
  }
  if (inverse) {
    const double scale = 1.0 / static_cast<double>(n);
    for (auto& v : a) v *= scale;
  }
}

Raster<Cplx> convolve_complex(const Raster<double>& input, const Raster<Cplx>& kernel) {
  if (kernel.width() % 2 == 0 || kernel.height() % 2 == 0)
    fail(ErrorCategory::validation, "convolution kernel dimensions must be odd");
  const int w = input.width();
  const int h = input.height();
  const int kw = kernel.width();
  const int kh = kernel.height();
  const int rx = kw / 2;
  const int ry = kh / 2;

  const std::size_t pw = next_pow2(static_cast<std::size_t>(w + kw - 1));
  const std::size_t ph = next_pow2(static_cast<std::size_t>(h + kh - 1));

  std::vector<Cplx> a(pw * ph), b(pw * ph);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) a[static_cast<std::size_t>(y) * pw + x] = input.at(x, y);
  // kernel center wrapped to (0,0) so the product aligns output with input
  for (int y = 0; y < kh; ++y) {
    const std::size_t py = static_cast<std::size_t>((y - ry + static_cast<int>(ph)) % static_cast<int>(ph));
    for (int x = 0; x < kw; ++x) {
      const std::size_t px = static_cast<std::size_t>((x - rx + static_cast<int>(pw)) % static_cast<int>(pw));
      b[py * pw + px] = kernel.at(x, y);
    }
  }

  transform_rows(a, pw, ph, false);
  transform_cols(a, pw, ph, false);
  transform_rows(b, pw, ph, false);
  transform_cols(b, pw, ph, false);
  for (std::size_t i = 0; i < a.size(); ++i) a[i] *= b[i];
  transform_cols(a, pw, ph, true);
  transform_rows(a, pw, ph, true);

  Raster<Cplx> out(w, h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) out.at(x, y) = a[static_cast<std::size_t>(y) * pw + x];
  return out;
}

}  // namespace railmap
