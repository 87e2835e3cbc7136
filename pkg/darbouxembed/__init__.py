"""
darbouxembed - Darboux-integrable 2-metrics and their isometric embeddings into flat 3-space
"""

__version__ = "1.0.0"
