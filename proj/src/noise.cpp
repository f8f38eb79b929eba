#include "permboot/noise.hpp"

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <memory>
#include <mutex>
#include <string>

#include "permboot/errors.hpp"
#include "permboot/random.hpp"

namespace permboot {

namespace {

// FFTW planning is not thread safe; execution is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

struct FftwFree {
    void operator()(void* p) const noexcept { fftw_free(p); }
};

template <typename T>
std::unique_ptr<T[], FftwFree> fftw_buffer(std::size_t n) {
    auto* p = static_cast<T*>(fftw_malloc(sizeof(T) * n));
    if (p == nullptr) throw std::bad_alloc();
    return std::unique_ptr<T[], FftwFree>(p);
}

class Plan {
public:
    explicit Plan(fftw_plan plan) : plan_(plan) {
        if (plan_ == nullptr) throw std::runtime_error("FFTW failed to create a plan");
    }
    Plan(const Plan&) = delete;
    Plan& operator=(const Plan&) = delete;
    ~Plan() {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(plan_);
    }
    void execute() const { fftw_execute(plan_); }

private:
    fftw_plan plan_;
};

void standardize(std::vector<double>& x) {
    const auto n = static_cast<double>(x.size());
    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= n;
    double ss = 0.0;
    for (double& v : x) {
        v -= mean;
        ss += v * v;
    }
    const double sd = std::sqrt(ss / (n - 1.0));
    check_invariant(sd > 0.0 && std::isfinite(sd), "synthesized noise has zero variance");
    for (double& v : x) v /= sd;
}

}  // namespace

void NoiseSpec::validate() const {
    if (length < 2) throw invalid_input("noise length must be >= 2, got " + std::to_string(length));
    if (!std::isfinite(alpha)) throw invalid_input("noise exponent must be finite");
    if (!(k > 0.0) || !std::isfinite(k)) throw invalid_input("spectral scale k must be > 0");
}

TimeSeries generate_power_law_noise(const NoiseSpec& spec) {
    spec.validate();
    const std::size_t n = spec.length;
    const std::size_t bins = n / 2 + 1;

    auto spectrum = fftw_buffer<fftw_complex>(bins);
    auto signal = fftw_buffer<double>(n);
    std::unique_ptr<Plan> plan;
    {
        std::lock_guard lock(planner_mutex());
        plan = std::make_unique<Plan>(fftw_plan_dft_c2r_1d(
            static_cast<int>(n), spectrum.get(), signal.get(), FFTW_ESTIMATE));
    }

    Rng rng(spec.seed);
    spectrum[0][0] = 0.0;
    spectrum[0][1] = 0.0;
    for (std::size_t j = 1; j < bins; ++j) {
        const double f = static_cast<double>(j) / static_cast<double>(n);
        const double scale = std::sqrt(0.5 * spec.k * std::pow(f, -spec.alpha));
        spectrum[j][0] = scale * rng.normal();
        const bool nyquist = (n % 2 == 0) && (j == n / 2);
        spectrum[j][1] = nyquist ? 0.0 : scale * rng.normal();
    }
    plan->execute();

    std::vector<double> values(signal.get(), signal.get() + n);
    standardize(values);
    return TimeSeries(std::move(values));
}

Periodogram periodogram(std::span<const double> series) {
    const std::size_t n = series.size();
    if (n < 2) throw insufficient_data("periodogram needs at least 2 samples");
    const std::size_t bins = n / 2 + 1;

    auto signal = fftw_buffer<double>(n);
    auto spectrum = fftw_buffer<fftw_complex>(bins);
    std::unique_ptr<Plan> plan;
    {
        std::lock_guard lock(planner_mutex());
        plan = std::make_unique<Plan>(fftw_plan_dft_r2c_1d(
            static_cast<int>(n), signal.get(), spectrum.get(), FFTW_ESTIMATE));
    }
    std::copy(series.begin(), series.end(), signal.get());
    plan->execute();

    Periodogram pg;
    pg.frequencies.reserve(bins - 1);
    pg.power.reserve(bins - 1);
    for (std::size_t j = 1; j < bins; ++j) {
        const std::complex<double> c(spectrum[j][0], spectrum[j][1]);
        pg.frequencies.push_back(static_cast<double>(j) / static_cast<double>(n));
        pg.power.push_back(std::norm(c) / static_cast<double>(n));
    }
    return pg;
}

double fit_spectral_slope(const Periodogram& pg) {
    const std::size_t n = pg.frequencies.size();
    if (pg.power.size() != n) throw fit_error("periodogram frequency/power lengths differ");
    if (n < 8) throw fit_error("spectral slope fit needs at least 8 bins, got " + std::to_string(n));

    std::vector<double> lx(n), ly(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double f = pg.frequencies[i];
        const double p = pg.power[i];
        if (!(f > 0.0) || !(p > 0.0) || !std::isfinite(f) || !std::isfinite(p)) {
            throw fit_error("spectral slope fit needs positive finite frequencies and power");
        }
        lx[i] = std::log(f);
        ly[i] = std::log(p);
    }
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
    }
    if (!(sxx > 0.0)) throw fit_error("spectral slope fit: frequencies are constant");
    return sxy / sxx;
}

}  // namespace permboot
