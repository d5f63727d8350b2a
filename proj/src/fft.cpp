#include "qnslab/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <tuple>

namespace qnslab {
namespace {

std::mutex plan_mutex;
std::map<std::tuple<int, std::size_t, int>, fftw_plan> plan_cache;

fftw_plan get_plan(int dim, std::size_t n_axis, int sign) {
    std::lock_guard<std::mutex> lock(plan_mutex);
    auto key = std::make_tuple(dim, n_axis, sign);
    auto it = plan_cache.find(key);
    if (it != plan_cache.end()) return it->second;

    int dims[3] = {static_cast<int>(n_axis), static_cast<int>(n_axis), static_cast<int>(n_axis)};
    std::size_t total = 1;
    for (int d = 0; d < dim; ++d) total *= n_axis;
    // Plan on a scratch buffer with FFTW_UNALIGNED so the plan can execute on
    // any caller buffer via fftw_execute_dft.
    fftw_complex* scratch = fftw_alloc_complex(total);
    fftw_plan plan = fftw_plan_dft(dim, dims, scratch, scratch, sign,
                                   FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(scratch);
    plan_cache.emplace(key, plan);
    return plan;
}

void execute(int dim, std::size_t n_axis, int sign, std::complex<double>* data) {
    fftw_plan plan = get_plan(dim, n_axis, sign);
    fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(data),
                     reinterpret_cast<fftw_complex*>(data));
}

}  // namespace

void fft_forward(int dim, std::size_t n_axis, std::complex<double>* data) {
    // exp(+i xi x) synthesis convention: analysis uses FFTW_FORWARD (e^{-i}).
    execute(dim, n_axis, FFTW_FORWARD, data);
    std::size_t total = 1;
    for (int d = 0; d < dim; ++d) total *= n_axis;
    const double scale = 1.0 / static_cast<double>(total);
    for (std::size_t i = 0; i < total; ++i) data[i] *= scale;
}

void fft_inverse(int dim, std::size_t n_axis, std::complex<double>* data) {
    execute(dim, n_axis, FFTW_BACKWARD, data);
}

}  // namespace qnslab
