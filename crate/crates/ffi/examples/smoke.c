/* Build: cargo build -p pite-lab-ffi --release
 *        cc -I crates/ffi/include crates/ffi/examples/smoke.c \
 *           target/release/libpite_lab_ffi.a -lm -lpthread -ldl -o smoke */
#include <stdio.h>
#include "pite_lab.h"

int main(void) {
    PiteSpectrum *spec = NULL;
    PiteSchedule *sched = NULL;
    PiteRunResult *run = NULL;
    PiteRunSummary summary;

    if (pite_spectrum_heisenberg(6, 1.0, 3.0, &spec) != PITE_STATUS_OK ||
        pite_schedule_new(PITE_SCHEDULE_KIND_LINEAR, 1e-4, 2.0, 100, 0.0, &sched) != PITE_STATUS_OK ||
        pite_run(spec, NULL, 0, sched, 0.9, 1.0, 0, &run) != PITE_STATUS_OK ||
        pite_run_result_summary(run, &summary) != PITE_STATUS_OK) {
        fprintf(stderr, "error: %s\n", pite_last_error_message());
        return 1;
    }
    printf("pite-lab %s: ln_error_tilde=%.6f fidelity=%.6f P_K=%.6e\n", pite_version(),
           summary.ln_error_tilde, summary.fidelity, summary.total_success);

    pite_run_result_free(run);
    pite_schedule_free(sched);
    pite_spectrum_free(spec);
    return 0;
}
