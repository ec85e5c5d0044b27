#include "dasr/nn/ops.hpp"

#include <Eigen/Core>
#include <algorithm>
#include <cmath>

#include "dasr/error.hpp"
#include "dasr/imaging/filter.hpp"
#include "dasr/imaging/resample.hpp"

namespace dasr::nn {

namespace {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MapMatrix = Eigen::Map<RowMatrix>;
using ConstMapMatrix = Eigen::Map<const RowMatrix>;

// Gradient buffer of a parent, or null when it does not take gradients.
Tensor* grad_of(Node& n, std::size_t i) {
  Node& p = *n.parents[i];
  return p.requires_grad ? &p.grad_buffer() : nullptr;
}

Tensor scalar_tensor(double v) { return Tensor({1, 1, 1, 1}, v); }

int conv_out(int n, int k, int stride, int pad) { return (n + 2 * pad - k) / stride + 1; }

void im2col(const double* x, int c, int h, int w, int k, int stride, int pad, int oh, int ow,
            double* col) {
  const std::size_t p = static_cast<std::size_t>(oh) * ow;
  for (int ci = 0; ci < c; ++ci)
    for (int ky = 0; ky < k; ++ky)
      for (int kx = 0; kx < k; ++kx) {
        double* row = col + ((static_cast<std::size_t>(ci) * k + ky) * k + kx) * p;
        for (int oy = 0; oy < oh; ++oy) {
          const int iy = oy * stride - pad + ky;
          double* dst = row + static_cast<std::size_t>(oy) * ow;
          if (iy < 0 || iy >= h) {
            std::fill_n(dst, ow, 0.0);
            continue;
          }
          const double* src = x + (static_cast<std::size_t>(ci) * h + iy) * w;
          for (int ox = 0; ox < ow; ++ox) {
            const int ix = ox * stride - pad + kx;
            dst[ox] = (ix >= 0 && ix < w) ? src[ix] : 0.0;
          }
        }
      }
}

void col2im(const double* col, int c, int h, int w, int k, int stride, int pad, int oh, int ow,
            double* dx) {
  const std::size_t p = static_cast<std::size_t>(oh) * ow;
  for (int ci = 0; ci < c; ++ci)
    for (int ky = 0; ky < k; ++ky)
      for (int kx = 0; kx < k; ++kx) {
        const double* row = col + ((static_cast<std::size_t>(ci) * k + ky) * k + kx) * p;
        for (int oy = 0; oy < oh; ++oy) {
          const int iy = oy * stride - pad + ky;
          if (iy < 0 || iy >= h) continue;
          double* dst = dx + (static_cast<std::size_t>(ci) * h + iy) * w;
          const double* src = row + static_cast<std::size_t>(oy) * ow;
          for (int ox = 0; ox < ow; ++ox) {
            const int ix = ox * stride - pad + kx;
            if (ix >= 0 && ix < w) dst[ix] += src[ox];
          }
        }
      }
}

template <typename F>
Var unary(const Var& x, F f, std::function<void(Node&)> bw) {
  Tensor out(x->value.shape());
  const auto in = x->value.values();
  for (std::size_t i = 0; i < in.size(); ++i) out[i] = f(in[i]);
  return make_node(std::move(out), {x}, std::move(bw));
}

void require_same(const Shape& a, const Shape& b, const char* what) {
  if (!(a == b))
    throw InvalidArgument(std::string(what) + ": shape mismatch " + to_string(a) + " vs " +
                          to_string(b));
}

// Separable linear map on every plane: out = R * plane * C^T.
void resample_planes(const Tensor& in, Tensor& out, const ResampleTaps& rows,
                     const ResampleTaps& cols) {
  const Shape& si = in.shape();
  const Shape& so = out.shape();
  std::vector<double> tmp(static_cast<std::size_t>(si.h) * so.w);
  for (int n = 0; n < si.n; ++n)
    for (int c = 0; c < si.c; ++c) {
      const double* src = in.data() + in.offset(n, c, 0, 0);
      double* dst = out.data() + out.offset(n, c, 0, 0);
      for (int y = 0; y < si.h; ++y)
        for (int x = 0; x < so.w; ++x) {
          double acc = 0.0;
          for (const Tap& t : cols[x]) acc += t.weight * src[y * si.w + t.index];
          tmp[y * so.w + x] = acc;
        }
      for (int y = 0; y < so.h; ++y)
        for (int x = 0; x < so.w; ++x) {
          double acc = 0.0;
          for (const Tap& t : rows[y]) acc += t.weight * tmp[t.index * so.w + x];
          dst[y * so.w + x] = acc;
        }
    }
}

// Adjoint of resample_planes, accumulated into gin.
void resample_planes_adjoint(const Tensor& gout, Tensor& gin, const ResampleTaps& rows,
                             const ResampleTaps& cols) {
  const Shape& si = gin.shape();
  const Shape& so = gout.shape();
  std::vector<double> tmp(static_cast<std::size_t>(si.h) * so.w);
  for (int n = 0; n < si.n; ++n)
    for (int c = 0; c < si.c; ++c) {
      const double* g = gout.data() + gout.offset(n, c, 0, 0);
      double* dst = gin.data() + gin.offset(n, c, 0, 0);
      std::fill(tmp.begin(), tmp.end(), 0.0);
      for (int y = 0; y < so.h; ++y)
        for (const Tap& t : rows[y])
          for (int x = 0; x < so.w; ++x) tmp[t.index * so.w + x] += t.weight * g[y * so.w + x];
      for (int y = 0; y < si.h; ++y)
        for (int x = 0; x < so.w; ++x)
          for (const Tap& t : cols[x]) dst[y * si.w + t.index] += t.weight * tmp[y * so.w + x];
    }
}

}  // namespace

Var conv2d(const Var& x, const Var& weight, const Var& bias, int stride, int pad) {
  const Shape& xs = x->value.shape();
  const Shape& ws = weight->value.shape();
  DASR_REQUIRE(ws.h == ws.w, "conv2d: square kernels only");
  if (xs.c != ws.c)
    throw InvalidArgument("conv2d: input has " + std::to_string(xs.c) + " channels, kernel expects " +
                          std::to_string(ws.c));
  const int k = ws.h;
  const int oh = conv_out(xs.h, k, stride, pad);
  const int ow = conv_out(xs.w, k, stride, pad);
  if (oh < 1 || ow < 1)
    throw InvalidArgument("conv2d: input " + to_string(xs) + " too small for kernel " +
                          std::to_string(k));
  const int kdim = xs.c * k * k;
  const std::size_t p = static_cast<std::size_t>(oh) * ow;

  Tensor out({xs.n, ws.n, oh, ow});
  std::vector<double> col(static_cast<std::size_t>(kdim) * p);
  ConstMapMatrix wm(weight->value.data(), ws.n, kdim);
  for (int n = 0; n < xs.n; ++n) {
    im2col(x->value.data() + x->value.offset(n, 0, 0, 0), xs.c, xs.h, xs.w, k, stride, pad, oh, ow,
           col.data());
    MapMatrix ym(out.data() + out.offset(n, 0, 0, 0), ws.n, static_cast<Eigen::Index>(p));
    ym.noalias() = wm * ConstMapMatrix(col.data(), kdim, static_cast<Eigen::Index>(p));
    if (bias)
      for (int o = 0; o < ws.n; ++o) ym.row(o).array() += bias->value[o];
  }

  std::vector<Var> parents{x, weight};
  if (bias) parents.push_back(bias);
  return make_node(std::move(out), std::move(parents), [=](Node& self) {
    Tensor* gx = grad_of(self, 0);
    Tensor* gw = grad_of(self, 1);
    Tensor* gb = self.parents.size() > 2 ? grad_of(self, 2) : nullptr;
    const Tensor& xv = self.parents[0]->value;
    const Tensor& wv = self.parents[1]->value;
    ConstMapMatrix wmat(wv.data(), ws.n, kdim);
    std::vector<double> colbuf(static_cast<std::size_t>(kdim) * p);
    for (int n = 0; n < xs.n; ++n) {
      ConstMapMatrix gy(self.grad.data() + self.grad.offset(n, 0, 0, 0), ws.n,
                        static_cast<Eigen::Index>(p));
      if (gw) {
        im2col(xv.data() + xv.offset(n, 0, 0, 0), xs.c, xs.h, xs.w, k, stride, pad, oh, ow,
               colbuf.data());
        MapMatrix(gw->data(), ws.n, kdim).noalias() +=
            gy * ConstMapMatrix(colbuf.data(), kdim, static_cast<Eigen::Index>(p)).transpose();
      }
      if (gb)
        for (int o = 0; o < ws.n; ++o) (*gb)[o] += gy.row(o).sum();
      if (gx) {
        MapMatrix(colbuf.data(), kdim, static_cast<Eigen::Index>(p)).noalias() =
            wmat.transpose() * gy;
        col2im(colbuf.data(), xs.c, xs.h, xs.w, k, stride, pad, oh, ow,
               gx->data() + gx->offset(n, 0, 0, 0));
      }
    }
  });
}

Var relu(const Var& x) {
  return unary(x, [](double v) { return v > 0.0 ? v : 0.0; }, [](Node& self) {
    if (Tensor* g = grad_of(self, 0)) {
      const Tensor& xv = self.parents[0]->value;
      for (std::size_t i = 0; i < g->numel(); ++i)
        if (xv[i] > 0.0) (*g)[i] += self.grad[i];
    }
  });
}

Var leaky_relu(const Var& x, double slope) {
  return unary(x, [slope](double v) { return v > 0.0 ? v : slope * v; }, [slope](Node& self) {
    if (Tensor* g = grad_of(self, 0)) {
      const Tensor& xv = self.parents[0]->value;
      for (std::size_t i = 0; i < g->numel(); ++i)
        (*g)[i] += xv[i] > 0.0 ? self.grad[i] : slope * self.grad[i];
    }
  });
}

Var sigmoid(const Var& x) {
  return unary(x, [](double v) { return 1.0 / (1.0 + std::exp(-v)); }, [](Node& self) {
    if (Tensor* g = grad_of(self, 0))
      for (std::size_t i = 0; i < g->numel(); ++i) {
        const double s = self.value[i];
        (*g)[i] += self.grad[i] * s * (1.0 - s);
      }
  });
}

Var add(const Var& a, const Var& b) { return add_scaled(a, b, 1.0); }
Var sub(const Var& a, const Var& b) { return add_scaled(a, b, -1.0); }

Var add_scaled(const Var& a, const Var& b, double s) {
  require_same(a->value.shape(), b->value.shape(), "add");
  Tensor out = a->value;
  for (std::size_t i = 0; i < out.numel(); ++i) out[i] += s * b->value[i];
  return make_node(std::move(out), {a, b}, [s](Node& self) {
    if (Tensor* ga = grad_of(self, 0))
      for (std::size_t i = 0; i < ga->numel(); ++i) (*ga)[i] += self.grad[i];
    if (Tensor* gb = grad_of(self, 1))
      for (std::size_t i = 0; i < gb->numel(); ++i) (*gb)[i] += s * self.grad[i];
  });
}

Var scale(const Var& x, double s) {
  return unary(x, [s](double v) { return s * v; }, [s](Node& self) {
    if (Tensor* g = grad_of(self, 0))
      for (std::size_t i = 0; i < g->numel(); ++i) (*g)[i] += s * self.grad[i];
  });
}

Var concat_channels(const std::vector<Var>& xs) {
  DASR_REQUIRE(!xs.empty(), "concat_channels: no inputs");
  Shape s = xs.front()->value.shape();
  int total = 0;
  for (const Var& v : xs) {
    const Shape& vs = v->value.shape();
    DASR_REQUIRE(vs.n == s.n && vs.h == s.h && vs.w == s.w, "concat_channels: extent mismatch");
    total += vs.c;
  }
  Tensor out({s.n, total, s.h, s.w});
  const std::size_t plane = s.plane();
  for (int n = 0; n < s.n; ++n) {
    int c0 = 0;
    for (const Var& v : xs) {
      const int vc = v->value.shape().c;
      std::copy_n(v->value.data() + v->value.offset(n, 0, 0, 0), vc * plane,
                  out.data() + out.offset(n, c0, 0, 0));
      c0 += vc;
    }
  }
  return make_node(std::move(out), xs, [plane](Node& self) {
    const int batch = self.value.shape().n;
    int c0 = 0;
    for (std::size_t i = 0; i < self.parents.size(); ++i) {
      const int vc = self.parents[i]->value.shape().c;
      if (Tensor* g = grad_of(self, i))
        for (int n = 0; n < batch; ++n) {
          const double* src = self.grad.data() + self.grad.offset(n, c0, 0, 0);
          double* dst = g->data() + g->offset(n, 0, 0, 0);
          for (std::size_t j = 0; j < vc * plane; ++j) dst[j] += src[j];
        }
      c0 += vc;
    }
  });
}

Var normalize_channels(const Var& x, std::span<const double> mean_v,
                       std::span<const double> stddev) {
  const Shape& s = x->value.shape();
  DASR_REQUIRE(static_cast<int>(mean_v.size()) == s.c && static_cast<int>(stddev.size()) == s.c,
               "normalize_channels: statistics do not match channel count");
  std::vector<double> m(mean_v.begin(), mean_v.end());
  std::vector<double> inv(s.c);
  for (int c = 0; c < s.c; ++c) inv[c] = 1.0 / stddev[c];
  Tensor out(s);
  for (int n = 0; n < s.n; ++n)
    for (int c = 0; c < s.c; ++c) {
      const std::size_t o = out.offset(n, c, 0, 0);
      for (std::size_t i = 0; i < s.plane(); ++i) out[o + i] = (x->value[o + i] - m[c]) * inv[c];
    }
  return make_node(std::move(out), {x}, [inv](Node& self) {
    if (Tensor* g = grad_of(self, 0)) {
      const Shape& sh = self.value.shape();
      for (int n = 0; n < sh.n; ++n)
        for (int c = 0; c < sh.c; ++c) {
          const std::size_t o = self.value.offset(n, c, 0, 0);
          for (std::size_t i = 0; i < sh.plane(); ++i) (*g)[o + i] += self.grad[o + i] * inv[c];
        }
    }
  });
}

Var bilinear_resize(const Var& x, int out_h, int out_w) {
  const Shape& s = x->value.shape();
  DASR_REQUIRE(out_h >= 1 && out_w >= 1, "bilinear_resize: degenerate target size");
  if (s.h == out_h && s.w == out_w) return x;
  auto rows = std::make_shared<ResampleTaps>(bilinear_taps(s.h, out_h));
  auto cols = std::make_shared<ResampleTaps>(bilinear_taps(s.w, out_w));
  Tensor out({s.n, s.c, out_h, out_w});
  resample_planes(x->value, out, *rows, *cols);
  return make_node(std::move(out), {x}, [rows, cols](Node& self) {
    if (Tensor* g = grad_of(self, 0)) resample_planes_adjoint(self.grad, *g, *rows, *cols);
  });
}

Var upsample_nearest(const Var& x, int factor) {
  DASR_REQUIRE(factor >= 1, "upsample_nearest: factor must be >= 1");
  if (factor == 1) return x;
  const Shape& s = x->value.shape();
  Tensor out({s.n, s.c, s.h * factor, s.w * factor});
  for (int n = 0; n < s.n; ++n)
    for (int c = 0; c < s.c; ++c)
      for (int y = 0; y < s.h * factor; ++y)
        for (int xx = 0; xx < s.w * factor; ++xx)
          out.at(n, c, y, xx) = x->value.at(n, c, y / factor, xx / factor);
  return make_node(std::move(out), {x}, [factor](Node& self) {
    if (Tensor* g = grad_of(self, 0)) {
      const Shape& so = self.value.shape();
      for (int n = 0; n < so.n; ++n)
        for (int c = 0; c < so.c; ++c)
          for (int y = 0; y < so.h; ++y)
            for (int xx = 0; xx < so.w; ++xx)
              g->at(n, c, y / factor, xx / factor) += self.grad.at(n, c, y, xx);
    }
  });
}

Var max_pool2(const Var& x) {
  const Shape& s = x->value.shape();
  const int oh = s.h / 2;
  const int ow = s.w / 2;
  DASR_REQUIRE(oh >= 1 && ow >= 1, "max_pool2: input too small");
  Tensor out({s.n, s.c, oh, ow});
  auto argmax = std::make_shared<std::vector<std::size_t>>(out.numel());
  std::size_t k = 0;
  for (int n = 0; n < s.n; ++n)
    for (int c = 0; c < s.c; ++c)
      for (int y = 0; y < oh; ++y)
        for (int xx = 0; xx < ow; ++xx, ++k) {
          std::size_t best = x->value.offset(n, c, 2 * y, 2 * xx);
          for (int dy = 0; dy < 2; ++dy)
            for (int dx = 0; dx < 2; ++dx) {
              const std::size_t o = x->value.offset(n, c, 2 * y + dy, 2 * xx + dx);
              if (x->value[o] > x->value[best]) best = o;
            }
          (*argmax)[k] = best;
          out[k] = x->value[best];
        }
  return make_node(std::move(out), {x}, [argmax](Node& self) {
    if (Tensor* g = grad_of(self, 0))
      for (std::size_t i = 0; i < argmax->size(); ++i) (*g)[(*argmax)[i]] += self.grad[i];
  });
}

Var haar_highfreq(const Var& x) {
  const Shape& s = x->value.shape();
  if (s.h % 2 != 0 || s.w % 2 != 0)
    throw InvalidArgument("haar_highfreq: image dims must be even, got " + to_string(s));
  const int h = s.h / 2;
  const int w = s.w / 2;
  const int ch = s.c;
  Tensor out({s.n, 3 * ch, h, w});
  const Tensor& xv = x->value;
  for (int n = 0; n < s.n; ++n)
    for (int c = 0; c < ch; ++c)
      for (int y = 0; y < h; ++y)
        for (int xx = 0; xx < w; ++xx) {
          const double a = xv.at(n, c, 2 * y, 2 * xx);
          const double b = xv.at(n, c, 2 * y, 2 * xx + 1);
          const double cc = xv.at(n, c, 2 * y + 1, 2 * xx);
          const double d = xv.at(n, c, 2 * y + 1, 2 * xx + 1);
          out.at(n, c, y, xx) = 0.5 * (a - b + cc - d);
          out.at(n, ch + c, y, xx) = 0.5 * (a + b - cc - d);
          out.at(n, 2 * ch + c, y, xx) = 0.5 * (a - b - cc + d);
        }
  return make_node(std::move(out), {x}, [h, w, ch](Node& self) {
    Tensor* g = grad_of(self, 0);
    if (!g) return;
    const Tensor& go = self.grad;
    for (int n = 0; n < go.shape().n; ++n)
      for (int c = 0; c < ch; ++c)
        for (int y = 0; y < h; ++y)
          for (int xx = 0; xx < w; ++xx) {
            const double lh = go.at(n, c, y, xx);
            const double hl = go.at(n, ch + c, y, xx);
            const double hh = go.at(n, 2 * ch + c, y, xx);
            g->at(n, c, 2 * y, 2 * xx) += 0.5 * (lh + hl + hh);
            g->at(n, c, 2 * y, 2 * xx + 1) += 0.5 * (-lh + hl - hh);
            g->at(n, c, 2 * y + 1, 2 * xx) += 0.5 * (lh - hl - hh);
            g->at(n, c, 2 * y + 1, 2 * xx + 1) += 0.5 * (-lh - hl + hh);
          }
  });
}

Var gaussian_highfreq(const Var& x, double sigma) {
  auto kernel = std::make_shared<std::vector<double>>(gaussian_kernel(sigma));
  const int r = static_cast<int>(kernel->size() / 2);
  const Shape s = x->value.shape();
  Tensor out(s);
  std::vector<double> tmp(s.plane());
  const auto& k = *kernel;
  for (int n = 0; n < s.n; ++n)
    for (int c = 0; c < s.c; ++c) {
      const double* src = x->value.data() + x->value.offset(n, c, 0, 0);
      double* dst = out.data() + out.offset(n, c, 0, 0);
      for (int y = 0; y < s.h; ++y)
        for (int xx = 0; xx < s.w; ++xx) {
          double acc = 0.0;
          for (int d = -r; d <= r; ++d) acc += k[d + r] * src[y * s.w + reflect_index(xx + d, s.w)];
          tmp[y * s.w + xx] = acc;
        }
      for (int y = 0; y < s.h; ++y)
        for (int xx = 0; xx < s.w; ++xx) {
          double acc = 0.0;
          for (int d = -r; d <= r; ++d) acc += k[d + r] * tmp[reflect_index(y + d, s.h) * s.w + xx];
          dst[y * s.w + xx] = src[y * s.w + xx] - acc;
        }
    }
  return make_node(std::move(out), {x}, [kernel, r, s](Node& self) {
    Tensor* g = grad_of(self, 0);
    if (!g) return;
    const auto& kk = *kernel;
    std::vector<double> tmp(s.plane());
    for (int n = 0; n < s.n; ++n)
      for (int c = 0; c < s.c; ++c) {
        const double* go = self.grad.data() + self.grad.offset(n, c, 0, 0);
        double* dst = g->data() + g->offset(n, c, 0, 0);
        // Adjoint of the vertical then horizontal passes, in reverse order.
        std::fill(tmp.begin(), tmp.end(), 0.0);
        for (int y = 0; y < s.h; ++y)
          for (int d = -r; d <= r; ++d) {
            const int sy = reflect_index(y + d, s.h);
            for (int xx = 0; xx < s.w; ++xx) tmp[sy * s.w + xx] += kk[d + r] * go[y * s.w + xx];
          }
        for (std::size_t i = 0; i < s.plane(); ++i) dst[i] += go[i];
        for (int y = 0; y < s.h; ++y)
          for (int xx = 0; xx < s.w; ++xx)
            for (int d = -r; d <= r; ++d)
              dst[y * s.w + reflect_index(xx + d, s.w)] -= kk[d + r] * tmp[y * s.w + xx];
      }
  });
}

Var mean(const Var& x) {
  const auto v = x->value.values();
  double acc = 0.0;
  for (double e : v) acc += e;
  const double inv = 1.0 / static_cast<double>(v.size());
  return make_node(scalar_tensor(acc * inv), {x}, [inv](Node& self) {
    if (Tensor* g = grad_of(self, 0))
      for (std::size_t i = 0; i < g->numel(); ++i) (*g)[i] += self.grad[0] * inv;
  });
}

Var sum_scalars(const std::vector<std::pair<double, Var>>& terms) {
  DASR_REQUIRE(!terms.empty(), "sum_scalars: no terms");
  double acc = 0.0;
  std::vector<Var> parents;
  std::vector<double> coeffs;
  for (const auto& [c, v] : terms) {
    acc += c * v->value.item();
    parents.push_back(v);
    coeffs.push_back(c);
  }
  return make_node(scalar_tensor(acc), std::move(parents), [coeffs](Node& self) {
    for (std::size_t i = 0; i < coeffs.size(); ++i)
      if (Tensor* g = grad_of(self, i)) (*g)[0] += coeffs[i] * self.grad[0];
  });
}

Var weighted_l1(const Var& pred, const Var& target, const Tensor& weight) {
  const Shape s = pred->value.shape();
  require_same(s, target->value.shape(), "weighted_l1");
  const bool weighted = !weight.empty();
  if (weighted) {
    const Shape& ws = weight.shape();
    if (!(ws.n == s.n && ws.c == 1 && ws.h == s.h && ws.w == s.w))
      throw InvalidArgument("weighted_l1: weight map " + to_string(ws) + " does not match " +
                            to_string(s));
  }
  const double inv = 1.0 / static_cast<double>(s.numel());
  // Per-element signed weight d|w * r| / dr = w * sign(w * r).
  auto slope = std::make_shared<std::vector<double>>(s.numel());
  double acc = 0.0;
  std::size_t i = 0;
  for (int n = 0; n < s.n; ++n)
    for (int c = 0; c < s.c; ++c)
      for (std::size_t j = 0; j < s.plane(); ++j, ++i) {
        const double w = weighted ? weight[n * s.plane() + j] : 1.0;
        const double r = w * (pred->value[i] - target->value[i]);
        acc += std::abs(r);
        (*slope)[i] = r > 0.0 ? w : (r < 0.0 ? -w : 0.0);
      }
  return make_node(scalar_tensor(acc * inv), {pred, target}, [slope, inv](Node& self) {
    const double g0 = self.grad[0] * inv;
    if (Tensor* gp = grad_of(self, 0))
      for (std::size_t k = 0; k < gp->numel(); ++k) (*gp)[k] += g0 * (*slope)[k];
    if (Tensor* gt = grad_of(self, 1))
      for (std::size_t k = 0; k < gt->numel(); ++k) (*gt)[k] -= g0 * (*slope)[k];
  });
}

namespace {

double stable_sigmoid(double v) {
  if (v >= 0.0) return 1.0 / (1.0 + std::exp(-v));
  const double e = std::exp(v);
  return e / (1.0 + e);
}

// mean log(f(clamp(p))) with f(p) = p or 1 - p.
Var mean_log_clamped(const Var& logits, double eps, bool complement) {
  DASR_REQUIRE(eps > 0.0 && eps < 0.5, "clamp epsilon must be in (0, 0.5)");
  const auto v = logits->value.values();
  const double inv = 1.0 / static_cast<double>(v.size());
  auto dlog = std::make_shared<std::vector<double>>(v.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double p = stable_sigmoid(v[i]);
    const bool inside = p > eps && p < 1.0 - eps;
    const double pc = std::clamp(p, eps, 1.0 - eps);
    acc += std::log(complement ? 1.0 - pc : pc);
    // d/dl log(1 - sigmoid) = -sigmoid; d/dl log(sigmoid) = 1 - sigmoid.
    (*dlog)[i] = inside ? (complement ? -p : 1.0 - p) : 0.0;
  }
  return make_node(scalar_tensor(acc * inv), {logits}, [dlog, inv](Node& self) {
    if (Tensor* g = grad_of(self, 0))
      for (std::size_t i = 0; i < g->numel(); ++i) (*g)[i] += self.grad[0] * inv * (*dlog)[i];
  });
}

}  // namespace

Var mean_log_one_minus_prob(const Var& logits, double eps) {
  return mean_log_clamped(logits, eps, true);
}

Var mean_log_prob(const Var& logits, double eps) { return mean_log_clamped(logits, eps, false); }

}  // namespace dasr::nn
