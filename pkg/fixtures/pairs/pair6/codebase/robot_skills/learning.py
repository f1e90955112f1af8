import rospy
import smach


class LearnPerson(smach.State):
    """Collect face snapshots of the person in view and train on them."""

    def __init__(self, robot, operator_designator, n_samples=5):
        smach.State.__init__(self, outcomes=['succeeded_learning', 'failed_learning'])
        self.robot = robot
        self.operator_designator = operator_designator
        self.n_samples = n_samples

    def execute(self, userdata=None):
        operator = self.operator_designator.resolve()
        samples = self.robot.perception.collect_face_samples(
            operator, n=self.n_samples, timeout=10.0)
        if len(samples) < self.n_samples:
            return 'failed_learning'
        self.robot.perception.train_face_model(operator, samples)
        return 'succeeded_learning'


class AbortLearn(smach.State):
    """Tear down a partially finished learning attempt."""

    def __init__(self, robot):
        smach.State.__init__(self, outcomes=['aborted'])
        self.robot = robot

    def execute(self, userdata=None):
        self.robot.perception.clear_face_samples()
        return 'aborted'
