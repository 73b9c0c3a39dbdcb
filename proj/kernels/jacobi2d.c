/* jacobi2d: 5-point stencil sweeps over a square grid, then the transpose
 * sweep back. Prints its own kernel time and a result checksum. */
#include <stdio.h>
#include <time.h>

#define N 384
#define TSTEPS 40

static double A[N][N];
static double B[N][N];

static double now_s(void) {
  struct timespec ts;
  clock_gettime(CLOCK_MONOTONIC, &ts);
  return (double)ts.tv_sec + 1e-9 * (double)ts.tv_nsec;
}

int main(void) {
  for (int i = 0; i < N; ++i) {
    for (int j = 0; j < N; ++j) {
      A[i][j] = ((double)i * (j + 2) + 2.0) / N;
      B[i][j] = ((double)i * (j + 3) + 3.0) / N;
    }
  }

  double t0 = now_s();
  for (int t = 0; t < TSTEPS; ++t) {
    // mrl:loop L0
    for (int i = 1; i < N - 1; ++i) {
      // mrl:loop L1
      for (int j = 1; j < N - 1; ++j) {
        // mrl:prefetch L1 __builtin_prefetch(&A[i][j + MRL_DIST], 0, 3);
        B[i][j] = 0.2 * (A[i][j] + A[i][j - 1] + A[i][j + 1] + A[i + 1][j] + A[i - 1][j]);
      }
    }
    for (int i = 1; i < N - 1; ++i) {
      for (int j = 1; j < N - 1; ++j) {
        A[i][j] = 0.2 * (B[i][j] + B[i][j - 1] + B[i][j + 1] + B[i + 1][j] + B[i - 1][j]);
      }
    }
  }
  double t1 = now_s();

  double checksum = 0.0;
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j)
      checksum += A[i][j] * (double)((i + j) % 7 + 1);

  printf("time_s=%.9f checksum=%.10e\n", t1 - t0, checksum);
  return 0;
}
