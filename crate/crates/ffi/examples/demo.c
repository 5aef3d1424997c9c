/* Plans a path and prints its vertices.
 *
 *   cc -I include examples/demo.c -L ../../target/release -lddgeo_ffi -lm -lpthread -ldl
 */
#include <stdio.h>
#include <stdlib.h>

#include "ddgeo.h"

int main(void) {
    DdgeoParams params;
    DdgeoConfig start = {0.0, 0.0, 0.0};
    DdgeoConfig end = {0.0, 4.0, 0.0};
    DdgeoPath *path = NULL;
    size_t n = 0;
    double length = 0.0;
    char type_word[8];

    if (ddgeo_params_from_n(16, 1.0, &params) != DDGEO_STATUS_OK ||
        ddgeo_plan(start, end, &params, &path) != DDGEO_STATUS_OK) {
        fprintf(stderr, "error: %s\n", ddgeo_last_error());
        return 1;
    }
    ddgeo_path_vertex_count(path, &n);
    ddgeo_path_length(path, &length);
    ddgeo_classify(path, &params, type_word, sizeof type_word);
    printf("type %s, length %.9f, %zu vertices\n", type_word, length, n);

    double *xy = malloc(2 * n * sizeof *xy);
    if (xy != NULL && ddgeo_path_vertices(path, xy, n) == DDGEO_STATUS_OK) {
        for (size_t i = 0; i < n; i++) {
            printf("%.6f %.6f\n", xy[2 * i], xy[2 * i + 1]);
        }
    }
    free(xy);
    ddgeo_path_free(path);
    return 0;
}
