/* atax: y = A^T (A x), repeated to give the timer something to chew on. */
#include <stdio.h>
#include <time.h>

#define M 900
#define NN 1000
#define REPEAT 24

static double A[M][NN];
static double x[NN];
static double y[NN];
static double tmp[M];

static double now_s(void) {
  struct timespec ts;
  clock_gettime(CLOCK_MONOTONIC, &ts);
  return (double)ts.tv_sec + 1e-9 * (double)ts.tv_nsec;
}

int main(void) {
  for (int i = 0; i < NN; ++i) x[i] = 1.0 + (double)i / NN;
  for (int i = 0; i < M; ++i)
    for (int j = 0; j < NN; ++j)
      A[i][j] = (double)((i + j) % 251) / (5.0 * NN);

  double t0 = now_s();
  for (int r = 0; r < REPEAT; ++r) {
    for (int i = 0; i < NN; ++i) y[i] = 0.0;
    // mrl:loop L0
    for (int i = 0; i < M; ++i) {
      double acc = 0.0;
      // mrl:loop L1
      for (int j = 0; j < NN; ++j) {
        // mrl:prefetch L1 __builtin_prefetch(&A[i][j + MRL_DIST], 0, 3);
        acc += A[i][j] * x[j];
      }
      tmp[i] = acc;
    }
    for (int i = 0; i < M; ++i)
      for (int j = 0; j < NN; ++j)
        y[j] += A[i][j] * tmp[i];
  }
  double t1 = now_s();

  double checksum = 0.0;
  for (int j = 0; j < NN; ++j) checksum += y[j] * (double)(j % 3 + 1);

  printf("time_s=%.9f checksum=%.10e\n", t1 - t0, checksum);
  return 0;
}
