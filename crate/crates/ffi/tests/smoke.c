#include <math.h>
#include <stdio.h>

#include "slipfilm.h"

int main(void) {
    SfParams p;
    SfSimulation *sim = NULL;
    double h[64], m0, e0, e1;

    if (sf_params_default(&p) != SF_STATUS_OK) return 1;
    if (sf_simulation_new_cosine(SF_MODEL_STRONG_SLIP, &p, 64, 1.0, 0.1, 1, 0.0, &sim) != SF_STATUS_OK) {
        fprintf(stderr, "%s\n", sf_last_error_message());
        return 1;
    }
    m0 = sf_simulation_mass(sim);
    sf_simulation_energy(sim, &e0);
    if (sf_simulation_advance(sim, 0.002) != SF_STATUS_OK) {
        fprintf(stderr, "%s\n", sf_last_error_message());
        return 1;
    }
    sf_simulation_energy(sim, &e1);
    if (sf_simulation_height(sim, h, 64) != SF_STATUS_OK) return 1;
    if (fabs(sf_simulation_mass(sim) - m0) > 1e-13 || !(e1 < e0) || h[0] >= 1.1) return 1;
    if (sf_pi(-1.0, 0.1, &e0) != SF_STATUS_DOMAIN) return 1;
    sf_simulation_free(sim);
    printf("ok\n");
    return 0;
}
