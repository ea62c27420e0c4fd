#include <ccdf/ccdf.h>

#include <stdio.h>

int main(void) {
  double k = 0.0;
  ccdf_curve* circle = NULL;
  if (ccdf_complete_K(0.5, &k) != CCDF_OK) return 1;
  if (ccdf_curve_circle(1, 1.0, 64, &circle) != CCDF_OK) return 1;
  ccdf_curve_metrics m;
  if (ccdf_curve_metrics_get(circle, &m) != CCDF_OK || m.omega != 1) return 1;
  ccdf_curve_free(circle);
  if (ccdf_complete_K(2.0, &k) != CCDF_ERR_DOMAIN) return 1;
  printf("%s %s\n", ccdf_version(), ccdf_last_error());
  return 0;
}
