"""Microblog activity statistics and retweet-graph analytics toolkit."""

__version__ = "0.1.0"
