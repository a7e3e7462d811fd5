#pragma once

#include "ttlcache/distributions.hpp"

// Per-family closed-form costs per time unit, written out term by term from
// the explicit densities. They share no code with the generic expressions in
// analytic.hpp and serve as an independent check on them.
namespace ttlcache::closed_form {

double offline(const Distribution& d, double remote_cost);
double baseline(const Distribution& d, double remote_cost);
double always_1st(const Distribution& d, double remote_cost, double ttl);
double always_2nd(const Distribution& d, double remote_cost, double ttl);
double single_mth(const Distribution& d, double remote_cost, double ttl, int m);
double dual_2nd(const Distribution& d, double remote_cost, double ttl, double window);

}  // namespace ttlcache::closed_form
