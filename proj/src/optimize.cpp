#include "spinphoton/optimize.hpp"

#include <memory>

#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>
#include <gsl/gsl_vector.h>

#include "spinphoton/errors.hpp"

namespace spinphoton {

namespace {

struct VectorDeleter {
  void operator()(gsl_vector* v) const { gsl_vector_free(v); }
};
struct MinimizerDeleter {
  void operator()(gsl_multimin_fminimizer* m) const { gsl_multimin_fminimizer_free(m); }
};

using VectorPtr = std::unique_ptr<gsl_vector, VectorDeleter>;

VectorPtr to_gsl(const std::vector<double>& v) {
  VectorPtr out(gsl_vector_alloc(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) gsl_vector_set(out.get(), i, v[i]);
  return out;
}

using Objective = std::function<double(std::span<const double>)>;

double trampoline(const gsl_vector* x, void* params) {
  const auto& f = *static_cast<const Objective*>(params);
  return f(std::span<const double>(x->data, x->size));
}

}  // namespace

SimplexResult nelder_mead_minimize(const Objective& f, std::vector<double> start,
                                   std::vector<double> step, int max_iterations,
                                   double size_tolerance) {
  if (start.empty() || start.size() != step.size()) {
    throw InvalidParams("nelder_mead_minimize: start and step must be non-empty and equal length");
  }
  // GSL aborts by default; errors here surface as return codes instead.
  gsl_set_error_handler_off();

  const std::size_t n = start.size();
  gsl_multimin_function fn{&trampoline, n, const_cast<Objective*>(&f)};
  std::unique_ptr<gsl_multimin_fminimizer, MinimizerDeleter> m(
      gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, n));
  auto x = to_gsl(start);
  auto s = to_gsl(step);
  if (gsl_multimin_fminimizer_set(m.get(), &fn, x.get(), s.get()) != GSL_SUCCESS) {
    throw NumericalError("Nelder-Mead initialization failed");
  }

  SimplexResult result;
  int status = GSL_CONTINUE;
  while (status == GSL_CONTINUE && result.iterations < max_iterations) {
    ++result.iterations;
    if (gsl_multimin_fminimizer_iterate(m.get()) != GSL_SUCCESS) break;
    status = gsl_multimin_test_size(gsl_multimin_fminimizer_size(m.get()), size_tolerance);
  }
  result.converged = status == GSL_SUCCESS;
  result.value = m->fval;
  result.x.resize(n);
  for (std::size_t i = 0; i < n; ++i) result.x[i] = gsl_vector_get(m->x, i);
  return result;
}

}  // namespace spinphoton
