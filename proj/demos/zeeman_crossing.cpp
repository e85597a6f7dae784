// Zeeman spectroscopy demo: locate the g/e crossing of SrF and show how the
// tensor lightshift moves it to lower fields.

#include <cstdio>

#include "molgate/molecule.hpp"

using namespace molgate;

int main() {
  const auto srf =
      registry_species(std::string(MOLGATE_DATA_DIR) + "/species.registry", "SrF");

  const double b_cross = find_crossing(srf, 0.0);
  std::printf("SrF g/e crossing: %.2f G (2Be/gS muB = %.2f G)\n", b_cross,
              2.0 * srf.be_rad_s[0] /
                  (srf.g_s * units::bohr_magneton_rad_s_per_gauss));

  for (double u_mhz : {0.0, 0.5, 1.0, 2.0}) {
    const double u = units::mhz_to_rad_s(u_mhz);
    std::printf("  U_LS = %.1f MHz  ->  B_cross = %.2f G\n", u_mhz,
                find_crossing(srf, u));
  }

  // Park the field a ~1 MHz gap below the crossing and tune it away.
  const double gap = units::mhz_to_rad_s(1.0);
  const double b =
      b_cross - gap / (srf.g_s * units::bohr_magneton_rad_s_per_gauss);
  const double u0 = lightshift_for_zero_gap(srf, b);
  std::printf("closing a %.2f MHz gap at B = %.1f G needs U_0 = %.3f MHz "
              "(I ~ %.0f kW/cm^2 at delta_alpha = %.0f a0^3)\n",
              units::rad_s_to_mhz(gap), b, units::rad_s_to_mhz(u0),
              units::intensity_w_cm2_for_lightshift(srf.delta_alpha_a03, u0) / 1e3,
              srf.delta_alpha_a03);

  const auto basis = build_basis(3, {0, 1});
  const auto q = qubit_states(srf, b, u0, basis);
  std::printf("qubit gap after tuning: %.2e MHz; eta = %.4f, a = %.2e\n",
              units::rad_s_to_mhz(q.eps_e - q.eps_g), q.eta, q.a);
  return 0;
}
