#include <stdio.h>
#include <string.h>
#include "knotbench.h"

int main(void) {
    const uint32_t pd[12] = {1, 4, 2, 5, 3, 6, 4, 1, 5, 2, 6, 3};
    KbDiagram *d = NULL;
    if (kb_diagram_from_pd(pd, 3, &d) != KB_STATUS_OK) return 1;
    char *jones = NULL;
    if (kb_jones(d, &jones) != KB_STATUS_OK) return 2;
    int64_t s = 0;
    if (kb_s_invariant(d, &s) != KB_STATUS_OK) return 3;
    printf("%s|%lld\n", jones, (long long)s);
    kb_string_free(jones);
    kb_diagram_free(d);
    if (kb_diagram_from_json("nope", &d) != KB_STATUS_PARSE) return 4;
    if (kb_last_error() == NULL) return 5;
    return 0;
}
