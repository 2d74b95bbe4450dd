#include "enpp/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <tuple>

#include "enpp/error.hpp"

namespace enpp {
namespace {

// FFTW planning is not thread safe, execution with the new-array interface
// is. Plans are created once per (d, N, direction) under a lock and reused.
class PlanCache {
 public:
  static PlanCache& instance() {
    static PlanCache cache;
    return cache;
  }

  fftw_plan get(int dim, int n, int sign) {
    std::lock_guard lock(mutex_);
    const auto key = std::make_tuple(dim, n, sign);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;

    int dims[3] = {n, n, n};
    std::size_t total = 1;
    for (int a = 0; a < dim; ++a) total *= static_cast<std::size_t>(n);
    auto* in = fftw_alloc_complex(total);
    auto* out = fftw_alloc_complex(total);
    fftw_plan plan =
        fftw_plan_dft(dim, dims, in, out, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(in);
    fftw_free(out);
    if (plan == nullptr) throw Error("FFTW failed to create a plan");
    plans_.emplace(key, plan);
    return plan;
  }

  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

 private:
  std::mutex mutex_;
  std::map<std::tuple<int, int, int>, fftw_plan> plans_;
};

void execute(const Grid& grid, int sign, std::vector<Complex>& in, std::vector<Complex>& out) {
  fftw_plan plan = PlanCache::instance().get(grid.dim(), grid.points(), sign);
  fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(in.data()),
                   reinterpret_cast<fftw_complex*>(out.data()));
}

}  // namespace

std::vector<Complex> forward_transform(const Grid& grid, std::span<const double> values) {
  if (values.size() != grid.size()) {
    throw InvalidArgument("forward_transform: sample count does not match grid");
  }
  std::vector<Complex> in(values.begin(), values.end());
  std::vector<Complex> out(grid.size());
  execute(grid, FFTW_FORWARD, in, out);
  const double scale = 1.0 / static_cast<double>(grid.size());
  for (auto& c : out) c *= scale;
  return out;
}

std::vector<double> inverse_transform(const Grid& grid, std::span<const Complex> coefficients) {
  if (coefficients.size() != grid.size()) {
    throw InvalidArgument("inverse_transform: coefficient count does not match grid");
  }
  std::vector<Complex> in(coefficients.begin(), coefficients.end());
  std::vector<Complex> out(grid.size());
  execute(grid, FFTW_BACKWARD, in, out);
  std::vector<double> values(grid.size());
  for (std::size_t i = 0; i < values.size(); ++i) values[i] = out[i].real();
  return values;
}

}  // namespace enpp
