// Copyright 2026 The sgflow Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/* Plain C consumer of the public header. */
#include <math.h>
#include <stdio.h>
#include <stdlib.h>

#include "sgflow/sgflow.h"

static int failures = 0;

#define EXPECT(cond)                                               \
  do {                                                             \
    if (!(cond)) {                                                 \
      fprintf(stderr, "%s:%d: %s (%s)\n", __FILE__, __LINE__, #cond, \
              sgf_last_error());                                   \
      ++failures;                                                  \
    }                                                              \
  } while (0)

int main(void) {
  sgf_grid* grid = NULL;
  sgf_body* ball = NULL;
  sgf_body* now = NULL;
  sgf_flow* flow = NULL;
  double* phi;
  double* h;
  double t = 0.0;
  size_t i, n;

  EXPECT(sgf_grid_create(1, 64, &grid) == SGF_OK);
  n = sgf_grid_size(grid);
  EXPECT(n == 64);
  phi = malloc(n * sizeof *phi);
  h = malloc(n * sizeof *h);
  EXPECT(sgf_phi_sample(grid, "1", phi, NULL) == SGF_OK);
  EXPECT(sgf_body_from_spec(grid, "ball:1", 1, &ball) == SGF_OK);

  /* circle, p = 0: r' = r^3, so h(t) = (1 - 2t)^(-1/2) */
  EXPECT(sgf_flow_create(ball, phi, 0.0, SGF_FLOW_UNNORMALIZED, &flow) == SGF_OK);
  EXPECT(sgf_flow_set_tolerances(flow, 1e-10, 1e-13) == SGF_OK);
  EXPECT(sgf_flow_advance(flow, 0.2) == SGF_OK);
  EXPECT(sgf_flow_time(flow, &t) == SGF_OK);
  EXPECT(fabs(t - 0.2) < 1e-12);
  EXPECT(sgf_flow_body(flow, &now) == SGF_OK);
  EXPECT(sgf_body_values(now, h, n) == SGF_OK);
  for (i = 0; i < n; ++i) EXPECT(fabs(h[i] - pow(1.0 - 2.0 * 0.2, -0.5)) < 1e-7);

  sgf_body_destroy(now);
  now = NULL;
  EXPECT(sgf_body_from_spec(grid, "ball:-1", 1, &now) == SGF_ERR_INVALID_ARGUMENT);
  EXPECT(now == NULL);
  EXPECT(sgf_status_name(SGF_ERR_IO) != NULL);

  sgf_flow_destroy(flow);
  sgf_body_destroy(ball);
  sgf_grid_destroy(grid);
  free(phi);
  free(h);
  if (failures) {
    fprintf(stderr, "%d failures\n", failures);
    return 1;
  }
  printf("capi smoke: ok\n");
  return 0;
}
