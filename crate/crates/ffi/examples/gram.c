#include <stdio.h>
#include <stdint.h>
#include "boundquiver.h"
int main(void) {
  BqQuiver *q = NULL;
  if (bq_quiver_bondal(&q) != BQ_STATUS_OK) return 1;
  int64_t g[9];
  bq_gram_matrix(q, g, 9);
  for (int i = 0; i < 9; i++) printf("%lld ", (long long)g[i]);
  char *json = NULL;
  int64_t v[3] = {1, 1, 1};
  BqStatus s = bq_certify_nonext(q, v, 3, 100, 16, &json);
  printf("\nstatus %d verify %d version %s\n", s, bq_verify_certificates(q, json), bq_version());
  bq_string_free(json);
  bq_quiver_free(q);
  return 0;
}
