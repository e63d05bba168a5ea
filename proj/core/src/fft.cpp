#include "sttd/fft.hpp"

#include "sttd/error.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <mutex>
#include <sstream>

namespace sttd {

namespace {

// The FFTW planner is not reentrant; execution of distinct plans is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

struct FftPlan::Impl {
  Dims dims;
  Kind kind;
  fftw_complex* buffer = nullptr;
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;

  Impl(Dims d, Kind k) : dims(d), kind(k) {
    if (d.size() == 0) throw InvalidArgument("FftPlan: empty tensor");
    buffer = fftw_alloc_complex(d.size());
    if (buffer == nullptr) throw std::bad_alloc();
    std::lock_guard lock(planner_mutex());
    if (kind == Kind::Mode3) {
      const int n[] = {int(d.n3)};
      const int howmany = int(d.slice_size());
      const int stride = int(d.slice_size());
      forward = fftw_plan_many_dft(1, n, howmany, buffer, nullptr, stride, 1, buffer, nullptr,
                                   stride, 1, FFTW_FORWARD, FFTW_ESTIMATE);
      backward = fftw_plan_many_dft(1, n, howmany, buffer, nullptr, stride, 1, buffer, nullptr,
                                    stride, 1, FFTW_BACKWARD, FFTW_ESTIMATE);
    } else {
      // FFTW is row-major; our fastest index is i, so the dims are reversed.
      forward = fftw_plan_dft_3d(int(d.n3), int(d.n2), int(d.n1), buffer, buffer, FFTW_FORWARD,
                                 FFTW_ESTIMATE);
      backward = fftw_plan_dft_3d(int(d.n3), int(d.n2), int(d.n1), buffer, buffer,
                                  FFTW_BACKWARD, FFTW_ESTIMATE);
    }
    if (forward == nullptr || backward == nullptr) {
      release();
      throw Error("FftPlan: FFTW failed to create a plan");
    }
  }

  ~Impl() { release(); }

  void release() {
    std::lock_guard lock(planner_mutex());
    if (forward) fftw_destroy_plan(forward);
    if (backward) fftw_destroy_plan(backward);
    if (buffer) fftw_free(buffer);
    forward = backward = nullptr;
    buffer = nullptr;
  }

  double inverse_scale() const {
    return kind == Kind::Mode3 ? 1.0 / double(dims.n3) : 1.0 / double(dims.size());
  }
};

FftPlan::FftPlan(Dims dims, Kind kind) : impl_(std::make_unique<Impl>(dims, kind)) {}
FftPlan::~FftPlan() = default;
FftPlan::FftPlan(FftPlan&&) noexcept = default;
FftPlan& FftPlan::operator=(FftPlan&&) noexcept = default;

const Dims& FftPlan::dims() const { return impl_->dims; }

void FftPlan::forward(const Tensor3& x, ComplexTensor3& out) {
  require_same_dims(x.dims(), impl_->dims, "FftPlan::forward");
  fftw_complex* buf = impl_->buffer;
  const auto src = x.data();
  for (std::size_t n = 0; n < src.size(); ++n) {
    buf[n][0] = src[n];
    buf[n][1] = 0.0;
  }
  fftw_execute(impl_->forward);
  if (out.dims() != impl_->dims) out = ComplexTensor3(impl_->dims);
  std::memcpy(static_cast<void*>(out.data().data()), buf, sizeof(fftw_complex) * src.size());
}

ComplexTensor3 FftPlan::forward(const Tensor3& x) {
  ComplexTensor3 out(impl_->dims);
  forward(x, out);
  return out;
}

void FftPlan::inverse(const ComplexTensor3& x, ComplexTensor3& out) {
  require_same_dims(x.dims(), impl_->dims, "FftPlan::inverse");
  fftw_complex* buf = impl_->buffer;
  const std::size_t total = x.size();
  std::memcpy(buf, static_cast<const void*>(x.data().data()), sizeof(fftw_complex) * total);
  fftw_execute(impl_->backward);
  if (out.dims() != impl_->dims) out = ComplexTensor3(impl_->dims);
  const double scale = impl_->inverse_scale();
  auto dst = out.data();
  for (std::size_t n = 0; n < total; ++n) dst[n] = Complex(buf[n][0] * scale, buf[n][1] * scale);
}

ComplexTensor3 FftPlan::inverse(const ComplexTensor3& x) {
  ComplexTensor3 out(impl_->dims);
  inverse(x, out);
  return out;
}

Tensor3 real_part_checked(const ComplexTensor3& x) {
  double max_re = 0.0;
  double max_im = 0.0;
  for (const Complex& v : x.data()) {
    max_re = std::max(max_re, std::abs(v.real()));
    max_im = std::max(max_im, std::abs(v.imag()));
  }
  if (!(max_im <= 1e-9 * std::max(1.0, max_re))) {
    std::ostringstream os;
    os << "imaginary residue " << max_im << " exceeds tolerance (max |re| = " << max_re << ")";
    throw SymmetryViolation(os.str());
  }
  Tensor3 out(x.dims());
  auto src = x.data();
  auto dst = out.data();
  for (std::size_t n = 0; n < src.size(); ++n) dst[n] = src[n].real();
  return out;
}

}  // namespace sttd
