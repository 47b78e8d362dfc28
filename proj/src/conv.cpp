#include "conv.hpp"

#include <fftw3.h>

#include <complex>
#include <cstring>
#include <map>
#include <mutex>
#include <stdexcept>

namespace amalgam::detail {

namespace {

int next_pow2(int v) {
    int p = 1;
    while (p < v) p <<= 1;
    return p;
}

// One forward/backward plan pair per padded size, with owned buffers.
// Executions are serialized; results are deterministic.
class ConvEngine {
  public:
    static ConvEngine& instance() {
        static ConvEngine engine;
        return engine;
    }

    std::vector<double> run(int n, int Px, int Py, const std::vector<double>& a,
                            const std::vector<double>& b) {
        std::scoped_lock lock(mtx_);
        Slot& slot = acquire(n, Px, Py);
        const std::size_t real_size = slot.real_size;
        const std::size_t cplx_size = slot.cplx_size;

        std::vector<std::complex<double>> fa(cplx_size), fb(cplx_size);
        transform(slot, a, fa.data());
        transform(slot, b, fb.data());
        const double scale = 1.0 / static_cast<double>(real_size);
        for (std::size_t i = 0; i < cplx_size; ++i) fa[i] *= fb[i] * scale;

        std::memcpy(slot.cplx, fa.data(), cplx_size * sizeof(std::complex<double>));
        fftw_execute(slot.backward);
        return std::vector<double>(slot.real, slot.real + real_size);
    }

  private:
    struct Slot {
        double* real = nullptr;
        fftw_complex* cplx = nullptr;
        fftw_plan forward = nullptr;
        fftw_plan backward = nullptr;
        std::size_t real_size = 0;
        std::size_t cplx_size = 0;
    };

    void transform(Slot& slot, const std::vector<double>& src, std::complex<double>* dst) {
        std::memset(slot.real, 0, slot.real_size * sizeof(double));
        std::memcpy(slot.real, src.data(), src.size() * sizeof(double));
        fftw_execute(slot.forward);
        std::memcpy(static_cast<void*>(dst), slot.cplx,
                    slot.cplx_size * sizeof(std::complex<double>));
    }

    Slot& acquire(int n, int Px, int Py) {
        const auto key = std::tuple{n, Px, Py};
        auto it = slots_.find(key);
        if (it != slots_.end()) return it->second;

        Slot slot;
        if (n == 1) {
            slot.real_size = static_cast<std::size_t>(Px);
            slot.cplx_size = static_cast<std::size_t>(Px / 2 + 1);
        } else {
            slot.real_size = static_cast<std::size_t>(Px) * Py;
            slot.cplx_size = static_cast<std::size_t>(Py) * (Px / 2 + 1);
        }
        slot.real = fftw_alloc_real(slot.real_size);
        slot.cplx = fftw_alloc_complex(slot.cplx_size);
        if (!slot.real || !slot.cplx) throw std::runtime_error("convolve: allocation failed");
        if (n == 1) {
            slot.forward = fftw_plan_dft_r2c_1d(Px, slot.real, slot.cplx, FFTW_ESTIMATE);
            slot.backward = fftw_plan_dft_c2r_1d(Px, slot.cplx, slot.real, FFTW_ESTIMATE);
        } else {
            slot.forward = fftw_plan_dft_r2c_2d(Py, Px, slot.real, slot.cplx, FFTW_ESTIMATE);
            slot.backward = fftw_plan_dft_c2r_2d(Py, Px, slot.cplx, slot.real, FFTW_ESTIMATE);
        }
        return slots_.emplace(key, slot).first->second;
    }

    std::mutex mtx_;
    std::map<std::tuple<int, int, int>, Slot> slots_;
};

}  // namespace

std::vector<double> convolve(const Grid& g, const std::vector<double>& f,
                             const std::vector<double>& kernel, int m) {
    const int N = g.resolution;
    const int K = 2 * m + 1;
    if (f.size() != g.cell_count())
        throw std::invalid_argument("convolve: field size mismatch");
    if (kernel.size() != (g.n == 1 ? static_cast<std::size_t>(K)
                                   : static_cast<std::size_t>(K) * K))
        throw std::invalid_argument("convolve: kernel size mismatch");

    const int P = next_pow2(N + K);

    if (g.n == 1) {
        std::vector<double> a(static_cast<std::size_t>(P), 0.0);
        std::vector<double> b(static_cast<std::size_t>(P), 0.0);
        std::copy(f.begin(), f.end(), a.begin());
        std::copy(kernel.begin(), kernel.end(), b.begin());
        const auto full = ConvEngine::instance().run(1, P, 1, a, b);
        std::vector<double> out(static_cast<std::size_t>(N));
        for (int i = 0; i < N; ++i) out[i] = full[static_cast<std::size_t>(i + m)];
        return out;
    }

    std::vector<double> a(static_cast<std::size_t>(P) * P, 0.0);
    std::vector<double> b(static_cast<std::size_t>(P) * P, 0.0);
    for (int iy = 0; iy < N; ++iy)
        std::memcpy(&a[static_cast<std::size_t>(iy) * P], &f[static_cast<std::size_t>(iy) * N],
                    static_cast<std::size_t>(N) * sizeof(double));
    for (int ky = 0; ky < K; ++ky)
        std::memcpy(&b[static_cast<std::size_t>(ky) * P],
                    &kernel[static_cast<std::size_t>(ky) * K],
                    static_cast<std::size_t>(K) * sizeof(double));
    const auto full = ConvEngine::instance().run(2, P, P, a, b);
    std::vector<double> out(static_cast<std::size_t>(N) * N);
    for (int iy = 0; iy < N; ++iy)
        for (int ix = 0; ix < N; ++ix)
            out[static_cast<std::size_t>(iy) * N + ix] =
                full[static_cast<std::size_t>(iy + m) * P + (ix + m)];
    return out;
}

}  // namespace amalgam::detail
