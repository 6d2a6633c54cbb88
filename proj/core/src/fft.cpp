#include "burstacc/fft.hpp"

#include <fftw3.h>

#include <cstdio>
#include <map>
#include <mutex>
#include <tuple>

namespace burstacc {
namespace {

// FFTW plan creation is not thread-safe; executions via the new-array
// interface are. Plans are cached per (w, h, sign) and reused with
// fftw_malloc'd scratch so the alignment assumption holds.
class PlanCache {
public:
    static PlanCache& instance() {
        static PlanCache cache;
        return cache;
    }

    void execute(int w, int h, int sign, const std::complex<double>* in,
                 std::complex<double>* out) {
        fftw_plan plan = nullptr;
        {
            std::lock_guard<std::mutex> lock(mutex_);
            auto key = std::make_tuple(w, h, sign);
            auto it = plans_.find(key);
            if (it == plans_.end()) {
                // out-of-place plan; new-array execution below must match
                fftw_complex* bin = fftw_alloc_complex(std::size_t(w) * h);
                fftw_complex* bout = fftw_alloc_complex(std::size_t(w) * h);
                // row-major: FFTW wants (n0, n1) = (rows, cols)
                fftw_plan p = fftw_plan_dft_2d(h, w, bin, bout, sign, FFTW_ESTIMATE);
                it = plans_.emplace(key, Entry{p, bin, bout}).first;
            }
            plan = it->second.plan;
        }

        const std::size_t n = std::size_t(w) * h;
        fftw_complex* tin = fftw_alloc_complex(n);
        fftw_complex* tout = fftw_alloc_complex(n);
        for (std::size_t i = 0; i < n; ++i) {
            tin[i][0] = in[i].real();
            tin[i][1] = in[i].imag();
        }
        fftw_execute_dft(plan, tin, tout);
        for (std::size_t i = 0; i < n; ++i)
            out[i] = std::complex<double>(tout[i][0], tout[i][1]);
        fftw_free(tin);
        fftw_free(tout);
    }

private:
    struct Entry {
        fftw_plan plan;
        fftw_complex* buf;
    };

    ~PlanCache() {
        for (auto& [key, e] : plans_) {
            fftw_destroy_plan(e.plan);
            fftw_free(e.buf);
        }
    }

    std::mutex mutex_;
    std::map<std::tuple<int, int, int>, Entry> plans_;
};

}  // namespace

ComplexSpectrum fft2(const ImageGrid& image) {
    ComplexSpectrum in(image.width(), image.height());
    for (std::size_t i = 0; i < image.size(); ++i)
        in[i] = std::complex<double>(image[i], 0.0);
    return fft2_complex(in);
}

ComplexSpectrum fft2_complex(const ComplexSpectrum& in) {
    ComplexSpectrum out(in.width(), in.height());
    PlanCache::instance().execute(in.width(), in.height(), FFTW_FORWARD,
                                  in.bins().data(), out.bins().data());
    return out;
}

ComplexSpectrum ifft2_complex(const ComplexSpectrum& in) {
    ComplexSpectrum out(in.width(), in.height());
    PlanCache::instance().execute(in.width(), in.height(), FFTW_BACKWARD,
                                  in.bins().data(), out.bins().data());
    const double scale = 1.0 / (double(in.width()) * double(in.height()));
    for (auto& b : out.bins()) b *= scale;
    return out;
}

ImageGrid ifft2(const ComplexSpectrum& spectrum) {
    const ComplexSpectrum full = ifft2_complex(spectrum);
    ImageGrid out(spectrum.width(), spectrum.height());
    double max_imag = 0.0, max_real = 0.0;
    for (std::size_t i = 0; i < full.size(); ++i) {
        out[i] = full[i].real();
        max_imag = std::max(max_imag, std::abs(full[i].imag()));
        max_real = std::max(max_real, std::abs(full[i].real()));
    }
    if (max_imag > 1e-10 * std::max(1.0, max_real)) {
        std::fprintf(stderr,
                     "ifft2: discarding imaginary residue %.3e (spectrum not "
                     "conjugate-symmetric)\n",
                     max_imag);
    }
    return out;
}

}  // namespace burstacc
