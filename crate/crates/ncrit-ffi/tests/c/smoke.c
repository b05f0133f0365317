#include <stdio.h>
#include <string.h>
#include "ncrit.h"

static int fail(const char *what) {
  const char *e = ncrit_last_error();
  fprintf(stderr, "%s: %s\n", what, e ? e : "(no message)");
  return 1;
}

int main(void) {
  NcritFormula *hua = NULL, *comm = NULL, *bad = NULL;
  NcritReport *rep = NULL;
  NcritVerdict v;
  char *json = NULL;

  if (ncrit_formula_parse("inv(x1 + x1*inv(x2)*x1) + inv(x1+x2) - inv(x1)", &hua) != NCRIT_STATUS_OK) return fail("parse hua");
  if (ncrit_test_hitset(hua, -1, &rep) != NCRIT_STATUS_OK) return fail("test hua");
  ncrit_report_verdict(rep, &v);
  if (v != NCRIT_VERDICT_ZERO) return fail("hua verdict");
  ncrit_report_free(rep);

  if (ncrit_formula_parse("inv(x1*x2 - x2*x1)", &comm) != NCRIT_STATUS_OK) return fail("parse comm");
  if (ncrit_test_random(comm, 3, 20, 1, &rep) != NCRIT_STATUS_OK) return fail("random comm");
  ncrit_report_verdict(rep, &v);
  if (v != NCRIT_VERDICT_NONZERO) return fail("comm verdict");
  ncrit_report_json(rep, &json);
  if (!strstr(json, "NONZERO")) return fail("comm json");
  ncrit_string_free(json);
  ncrit_report_free(rep);

  int64_t pt[8] = {1, 0, 0, 1, 2, 0, 0, 3};
  if (ncrit_eval_int(comm, 2, 2, pt, &json) != NCRIT_STATUS_OK) return fail("eval");
  if (!strstr(json, "NOT_DEFINED")) return fail("eval json");
  ncrit_string_free(json);

  if (ncrit_formula_parse("x1 +", &bad) != NCRIT_STATUS_PARSE_ERROR || ncrit_last_error() == NULL) return fail("parse error");

  ncrit_formula_free(hua);
  ncrit_formula_free(comm);
  puts("ok");
  return 0;
}
