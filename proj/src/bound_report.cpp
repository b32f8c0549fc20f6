#include "relaysec/bound_report.hpp"

#include "relaysec/errors.hpp"

namespace relaysec {
namespace {

template <typename Fn>
void attempt(BoundReport& report, const char* what, Fn&& fn) {
  try {
    fn();
  } catch (const ParameterError& e) {
    report.issues.push_back(std::string(what) + ": " + e.what());
  }
}

}  // namespace

BoundReport evaluate_bounds(const ProtocolParams& p, const Requirements& req,
                            const RegionModel& region) {
  BoundReport out;
  out.params = p;
  out.requirements = req;

  if (p.path_case == PathLossCase::EqualPathLoss) {
    attempt(out, "bound_t", [&] {
      out.bound_t = transmission_bound_equal(p.n, p.k, p.gamma_r, p.tau);
      out.bound_t_diagnostic = transmission_bound_equal_averaged(p.n, p.k, p.gamma_r, p.tau);
    });
    attempt(out, "bound_s", [&] {
      out.bound_s = secrecy_bound_equal(p.n, p.m, p.gamma_e, p.tau);
      out.bound_s_diagnostic = secrecy_bound_equal_averaged(p.n, p.m, p.gamma_e, p.tau);
    });
    attempt(out, "tau_min", [&] { out.window.tau_min = tau_min_equal(p.n, p.m, p.gamma_e, req.eps_s); });
    attempt(out, "tau_max", [&] { out.window.tau_max = tau_max_equal(p.n, p.k, p.gamma_r, req.eps_t); });
    attempt(out, "max_m", [&] {
      out.max_m = max_eaves_equal(p.n, p.k, p.gamma_r, p.gamma_e, req.eps_t, req.eps_s);
    });
  } else {
    attempt(out, "bound_t", [&] {
      out.bound_t = transmission_bound_general(p.n, p.k, p.r, p.gamma_r, p.tau, p.alpha, p.delta, region);
      out.bound_t_diagnostic =
          transmission_bound_general_tight(p.n, p.k, p.r, p.gamma_r, p.tau, p.alpha, p.delta, region);
    });
    attempt(out, "bound_s", [&] {
      out.bound_s = secrecy_bound_general(p.n, p.m, p.gamma_e, p.tau, p.d0, p.alpha, p.delta);
    });
    attempt(out, "tau_min", [&] {
      out.window.tau_min = tau_min_general(p.n, p.m, p.gamma_e, p.d0, p.alpha, p.delta, req.eps_s);
    });
    attempt(out, "tau_max", [&] {
      out.window.tau_max =
          tau_max_general(p.n, p.k, p.r, p.gamma_r, p.alpha, p.delta, req.eps_t, region);
    });
    attempt(out, "max_m", [&] {
      out.max_m = max_eaves_general(p.n, p.k, p.r, p.gamma_r, p.gamma_e, p.d0, p.alpha, p.delta,
                                    req.eps_t, req.eps_s, region);
    });
  }
  out.window.feasible =
      out.window.tau_min && out.window.tau_max && *out.window.tau_min <= *out.window.tau_max;
  return out;
}

}  // namespace relaysec
