"""
Constants and default values for the traffic graph classifier.

This module centralizes all magic numbers, default values, and constants
to improve maintainability and make configuration more explicit.
"""

# Capture parsing
PCAP_MAGIC_MICRO = 0xA1B2C3D4
PCAP_MAGIC_NANO = 0xA1B23C4D
PCAP_GLOBAL_HEADER_LEN = 24

# Flow cleaning
FLOW_LENGTH_CAP = 15  # packets kept per flow
MAX_FLOW_PACKETS = 10000  # flows longer than this are rejected
TIME_BLOCK_SECONDS = 60.0

# Split
DEFAULT_TRAIN_RATIO = 0.9

# Graph construction
DEFAULT_PMI_WINDOW = 5
MAX_GRAPH_NODES = 256

# Dataset file
DATASET_MAGIC = b"CTFE"
DATASET_VERSION = 1

# Checkpoint file
CHECKPOINT_MAGIC = b"CTFM"
CHECKPOINT_VERSION = 1

# Model defaults
DEFAULT_EMBED_DIM = 64
DEFAULT_HIDDEN_DIM = 128
DEFAULT_GNN_LAYERS = 2
PRELU_INIT_SLOPE = 0.25

# Contrastive learning
DEFAULT_TEMPERATURE = 0.07

# Adam
ADAM_BETAS = (0.9, 0.999)
ADAM_EPS = 1e-8

# Random stream tags, mixed into per-sample seeds so streams never collide
STREAM_SHUFFLE = 1
STREAM_GRAPH_AUGMENT = 2
STREAM_PACKET_DROP = 3
STREAM_DROPOUT = 4
STREAM_INIT = 5
STREAM_SPLIT = 6
STREAM_SYNTH = 7

# CLI exit codes
EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_RUNTIME = 3

# Default file name
DEFAULT_MANIFEST_FILE = "manifest.toml"
