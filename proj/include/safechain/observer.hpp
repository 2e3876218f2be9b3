#pragma once

#include "safechain/linalg.hpp"

namespace safechain {

struct ObserverGains {
    double lambda0 = 20.0;  // differentiator, sqrt term
    double lambda1 = 10.0;  // differentiator, sign term
    double k1 = 10.0;       // super-twisting, sqrt term
    double k2 = 10.0;       // super-twisting, integral-of-sign term
};

// Finite-time disturbance observer for one block of the transformed chain:
// auxiliary integrator r, sliding-mode differentiator (chi0, chi1) of
// sigma0 = r - e, and a super-twisting update of the estimate w_hat driven by
// sigma1 = sigma0 + zeta. All vectors have the block width m and all
// nonlinearities act elementwise.
struct ObserverChannel {
    ObserverGains gains;
    Vec r;
    Vec sigma0;
    Vec chi0;
    Vec chi1;
    Vec zeta;
    Vec sigma1;
    Vec int_sign;
    Vec w_hat;
    Vec w_hat_dot;
};

// r starts at e0 so that sigma0 is zero at the initial time.
ObserverChannel observer_init(const ObserverGains& gains, int m);
ObserverChannel observer_init(const ObserverGains& gains, const Vec& e0);

// One explicit-Euler step. The update order is fixed:
//   r += dt (phi_next + w_hat); sigma0 = r - phi_i;
//   differentiator; sigma1 = sigma0 + zeta;
//   w_hat += dt * w_hat_dot; int_sign += dt * sign(sigma1).
// phi_next is the next block of the chain, or the virtual input for the last block.
ObserverChannel observer_step(ObserverChannel ch, const Vec& phi_i, const Vec& phi_next, double dt);

// Advances one sample interval of length dt in `substeps` Euler steps.
// phi_i is interpolated linearly from phi_from to phi_to and sampled at the
// end of each substep; phi_next is sampled at the start. With one substep this
// is observer_step(ch, phi_to, next_from, dt).
ObserverChannel observer_advance(ObserverChannel ch, const Vec& phi_from, const Vec& phi_to, const Vec& next_from,
                                 const Vec& next_to, double dt, int substeps);

// Super-twisting admissibility: k1 >= 1.5 sqrt(bound), k2 >= 1.1 bound.
bool observer_gain_check(double k1, double k2, double varsigma_bar);

}  // namespace safechain
