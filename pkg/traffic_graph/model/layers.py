"""
Graph Encoder Layers

Mean-aggregation message passing over byte-value graphs with PReLU
activations and a mean readout per graph.
"""

import torch
from torch import Tensor, nn

from traffic_graph.constants import PRELU_INIT_SLOPE

__all__ = ["GraphEncoder", "MessagePassingLayer", "PReLU", "segment_mean"]


class PReLU(nn.Module):
    """
    Parametric ReLU with one shared slope

    The derivative at 0 is taken from the positive branch (1).
    """

    def __init__(self, slope: float = PRELU_INIT_SLOPE) -> None:
        super().__init__()
        self.weight = nn.Parameter(torch.tensor(slope))

    def forward(self, x: Tensor) -> Tensor:
        return torch.where(x >= 0, x, self.weight * x)


def segment_mean(values: Tensor, index: Tensor, num_segments: int) -> Tensor:
    """
    Mean of rows grouped by segment index; empty segments yield zeros

    >>> segment_mean(torch.tensor([[1.0], [3.0], [5.0]]), torch.tensor([0, 0, 2]), 3).flatten().tolist()
    [2.0, 0.0, 5.0]
    """
    total = values.new_zeros((num_segments, values.shape[1])).index_add_(0, index, values)
    count = values.new_zeros(num_segments).index_add_(0, index, values.new_ones(index.shape[0]))
    return total / count.clamp(min=1.0).unsqueeze(1)


class MessagePassingLayer(nn.Module):
    """
    h_v <- PReLU(W_self h_v + W_neigh mean_{u in N(v)} h_u + b)

    Isolated nodes see a zero neighbour mean.
    """

    def __init__(self, in_dim: int, out_dim: int) -> None:
        super().__init__()
        self.lin_self = nn.Linear(in_dim, out_dim, bias=True)
        self.lin_neigh = nn.Linear(in_dim, out_dim, bias=False)
        self.act = PReLU()

    def forward(self, x: Tensor, edge_index: Tensor) -> Tensor:
        """
        Args:
            x: (N, in_dim) node features
            edge_index: (2, M) directed (source, target) pairs, both directions present
        """
        source, target = edge_index
        neighbours = segment_mean(x[source], target, x.shape[0])
        return self.act(self.lin_self(x) + self.lin_neigh(neighbours))


class GraphEncoder(nn.Module):
    """
    Stack of message-passing layers followed by a per-graph mean readout
    """

    def __init__(self, in_dim: int, hidden_dim: int, num_layers: int, dropout: float = 0.0) -> None:
        super().__init__()
        dims = [in_dim] + [hidden_dim] * num_layers
        self.layers = nn.ModuleList(MessagePassingLayer(a, b) for a, b in zip(dims[:-1], dims[1:]))
        self.dropout = nn.Dropout(dropout)

    def forward(self, x: Tensor, edge_index: Tensor, graph_index: Tensor, num_graphs: int) -> Tensor:
        """
        Args:
            x: (N, in_dim) initial node features of every graph in the batch
            edge_index: (2, M) batch-level directed edges
            graph_index: (N,) graph number of each node
            num_graphs: Graphs in the batch

        Returns:
            (num_graphs, hidden_dim) graph vectors
        """
        for layer in self.layers:
            x = self.dropout(layer(x, edge_index))
        return segment_mean(x, graph_index, num_graphs)
