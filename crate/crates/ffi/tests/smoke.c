#include "grafrepair.h"
#include <stdio.h>
int main(void) {
    GrGraph *g = NULL;
    int rc = gr_graph_from_json("{\"type_graph\":{\"node_types\":[\"A\"],\"edge_types\":[]},\"nodes\":[{\"id\":0,\"type\":\"A\"}]}", NULL, &g);
    size_t n = 0, e = 0;
    gr_graph_size(g, &n, &e);
    printf("rc=%d nodes=%zu version=%s\n", rc, n, gr_version());
    gr_graph_free(g);
    return rc;
}
