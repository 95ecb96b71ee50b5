#include <stdio.h>
#include <string.h>
#include "coh.h"

static int fail(const char *what) {
    const char *e = coh_last_error();
    fprintf(stderr, "%s: %s\n", what, e ? e : "(no message)");
    return 1;
}

int main(void) {
    CohEventList *list = coh_event_list_new();
    if (coh_event_list_push(list, "x | y") != COH_STATUS_OK) return fail("push");
    if (coh_event_list_push(list, "x + y") != COH_STATUS_OK) return fail("push");
    if (coh_event_list_push(list, "x +") != COH_STATUS_PARSE) return fail("bad push accepted");
    if (coh_event_list_len(list) != 2) return fail("len");

    const char *prices[] = {"1/2", "1"};
    CohVerdict *v = NULL;
    if (coh_check_book(list, prices, 2, &v) != COH_STATUS_OK) return fail("check");
    if (!coh_verdict_is_coherent(v)) return fail("verdict");
    char *json = NULL;
    if (coh_verdict_to_json(v, &json) != COH_STATUS_OK) return fail("json");
    printf("%s\n", json);
    coh_string_free(json);
    coh_verdict_free(v);
    coh_event_list_free(list);

    bool holds = false;
    if (coh_decide_consequence("1", "P(x+y) <-> (P(x) -> P(x*y)) -> P(y)", &holds, NULL) != COH_STATUS_OK)
        return fail("decide");
    if (!holds) return fail("P3 instance");
    uint32_t n = 0;
    if (coh_local_deduction_exponent("P(x)", "P(x)*P(x)", &n) != COH_STATUS_OK || n != 2) return fail("ldt");
    printf("ok\n");
    return 0;
}
