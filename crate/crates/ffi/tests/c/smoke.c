#include <stdio.h>
#include <string.h>
#include "sharbly.h"

int main(void) {
    ShCycle *z = NULL;
    if (sh_cycle_build(3, &z) != SH_STATUS_OK) return 10;
    if (sh_cycle_len(z) != 1) return 11;
    bool valid = false;
    char *cert = NULL;
    if (sh_cycle_verify(z, 0, &valid, &cert) != SH_STATUS_OK || !valid) return 12;
    if (sh_cert_check(cert, &valid) != SH_STATUS_OK || !valid) return 13;
    sh_string_free(cert);
    sh_cycle_free(z);
    if (sh_cycle_build(9, &z) != SH_STATUS_UNSUPPORTED_RANK) return 14;
    if (strlen(sh_last_error()) == 0) return 15;
    int64_t v[6] = {1, 1, 1, 0, 0, -1};
    int64_t w[6];
    int32_t s = 0;
    if (sh_canonicalize(v, 3, 2, w, &s) != SH_STATUS_OK || s != -1 || w[0] != 0 || w[1] != 1) return 16;
    printf("ok %s\n", sh_version());
    return 0;
}
