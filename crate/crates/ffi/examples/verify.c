#include <stdio.h>
#include "tridesign.h"
int main(void) {
  TdDesign *d = NULL;
  if (td_dataset_expand("frob7", &d) != TD_STATUS_OK) return 1;
  TdVerifyReport r; TdBalanceReport b;
  td_design_verify(d, &r); td_design_balance(d, &b);
  printf("ok=%d tri=%llu lambda=%llu\n", r.ok, (unsigned long long)r.triangle_count, (unsigned long long)b.lambda);
  td_design_free(d);
  TdStatus s = td_dataset_expand("nope", &d);
  printf("%s: %s\n", td_status_str(s), td_last_error());
  return 0;
}
