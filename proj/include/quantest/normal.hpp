#pragma once

// Standard normal helpers shared by the density, inference and verify code.
namespace quantest {

double norm_pdf(double z) noexcept;
double norm_cdf(double z) noexcept;
// Upper tail 1 - Phi(z) without cancellation.
double norm_sf(double z) noexcept;
// Phi^{-1}(p) for 0 < p < 1; throws std::domain_error otherwise.
double norm_quantile(double p);

}  // namespace quantest
