#pragma once

#include <stdexcept>
#include <string>

namespace tevr {

enum class errc {
    non_finite,
    overflow,
    branch_failure,
    zone_mismatch,
    condition_violated,
    grid_too_coarse,
    frequency_out_of_range,
    no_convergence,
    contour_through_zero,
    phase_jump_unresolved,
    sentinel_nonzero_winding,
    dirichlet_pole,
    newton_divergence,
    insufficient_data,
    incomplete_spectrum,
    degenerate_rho,
    invalid_argument
};

class error : public std::runtime_error {
  public:
    error(errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
    errc code() const noexcept { return code_; }

  private:
    errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) { throw error(code, what); }

} // namespace tevr
