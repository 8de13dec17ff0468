#include <stdio.h>
#include <stdlib.h>

#include "rispower.h"

int main(void) {
    RispowerDescriptor *ris = NULL;
    if (rispower_builtin("pin-16x16", &ris) != RISPOWER_STATUS_OK) {
        fprintf(stderr, "%s\n", rispower_last_error_message());
        return 1;
    }

    uint64_t cells[256];
    for (size_t i = 0; i < 256; i++) cells[i] = i % 2;

    RispowerPowerBreakdown p;
    RispowerStatus status = rispower_total_power(ris, cells, 256, &p);
    if (status != RISPOWER_STATUS_OK) {
        fprintf(stderr, "%s\n", rispower_last_error_message());
        rispower_descriptor_free(ris);
        return 1;
    }
    printf("circuits=%llu static_uw=%llu dynamic_uw=%llu total_uw=%llu\n",
           (unsigned long long)p.static_breakdown.drive_circuit_count,
           (unsigned long long)p.static_breakdown.static_total_uw,
           (unsigned long long)p.dynamic_uw,
           (unsigned long long)p.total_uw);

    RispowerDescriptor *varactor = NULL;
    RispowerStaticBreakdown s;
    rispower_builtin("varactor-8x16", &varactor);
    if (rispower_static_breakdown(varactor, &s) == RISPOWER_STATUS_MISSING_CONTROL_BOARD_POWER) {
        printf("varactor: %s\n", rispower_last_error_message());
    }

    rispower_descriptor_free(varactor);
    rispower_descriptor_free(ris);
    return 0;
}
