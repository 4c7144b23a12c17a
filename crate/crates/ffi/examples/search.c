/* cc -I crates/ffi/include examples/search.c target/release/libqwalk_ffi.a -lm -lpthread -ldl */
#include <stdio.h>
#include "qwalk.h"

int main(void) {
    QwSearchResult *r = NULL;
    QwStatus st = qw_search_run("hypercube", 4, "1011", 0, 3, 1024, 0, &r);
    if (st != QW_STATUS_OK) {
        fprintf(stderr, "error %d: %s\n", (int)st, qw_last_error());
        return 1;
    }
    size_t it = 0;
    double p = 0.0;
    qw_search_hitting_time(r, &it, &p);
    printf("hitting_time=%zu peak=%.6f\n", it, p);
    qw_search_free(r);
    return 0;
}
