/* gemm: C = alpha*A*B + beta*C on square matrices. */
#include <stdio.h>
#include <time.h>

#define N 192

static double A[N][N];
static double B[N][N];
static double C[N][N];

static double now_s(void) {
  struct timespec ts;
  clock_gettime(CLOCK_MONOTONIC, &ts);
  return (double)ts.tv_sec + 1e-9 * (double)ts.tv_nsec;
}

int main(void) {
  const double alpha = 1.5;
  const double beta = 1.2;
  for (int i = 0; i < N; ++i) {
    for (int j = 0; j < N; ++j) {
      A[i][j] = (double)((i * j + 1) % N) / N;
      B[i][j] = (double)((i * (j + 1)) % N) / N;
      C[i][j] = (double)((i * (j + 2) + 2) % N) / N;
    }
  }

  double t0 = now_s();
  for (int r = 0; r < 4; ++r) {
    // mrl:loop L0
    for (int i = 0; i < N; ++i) {
      // mrl:loop L1
      for (int j = 0; j < N; ++j) {
        C[i][j] *= beta;
        double acc = 0.0;
        for (int k = 0; k < N; ++k) {
          // mrl:prefetch L1 __builtin_prefetch(&B[k][MRL_DIST], 0, 3);
          acc += A[i][k] * B[k][j];
        }
        C[i][j] += alpha * acc;
      }
    }
  }
  double t1 = now_s();

  double checksum = 0.0;
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j)
      checksum += C[i][j] * (double)((i + 2 * j) % 5 + 1);

  printf("time_s=%.9f checksum=%.10e\n", t1 - t0, checksum);
  return 0;
}
