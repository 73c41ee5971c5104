"""Console reporting for the topic modeling engine"""
